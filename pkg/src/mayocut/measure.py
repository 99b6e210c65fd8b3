"""Touching bisectors for compactly supported measures by grid refinement.

Each level of a schedule ``eps_1 > eps_2 > ...`` rasterizes the inputs on a
cube grid whose cells have diameter below ``eps_k``, moves every cell's mass
to its centroid, and looks for a hyperplane bisecting all the resulting
atomic measures while passing within ``eps_k`` of each of them. Two search
strategies are offered:

``enumerate``
    exact atom-tuple search from :mod:`mayocut.discrete`; the plane contains
    a centroid of every measure. Exponential, so only for coarse grids.
``sweep``
    scan directions, intersect the per-measure median intervals and choose
    the offset nearest to every measure's atoms. Falls back to a bracketed
    search plus snapping onto atom tuples when no sampled direction hits a
    common median.

Every level records the guarantees it achieved: the distance from the plane
to each measure's nearest loaded cell, and the mass of the cells within
``eps_k`` of the plane, which bounds how far an open side of the true
measure can exceed half its mass.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .bisection import AtomicMeasure, CutReport, evaluate_cut
from .discrete import Diagnostics, Instance, Solution, resolve_workers, solve_touching_cut
from .errors import CapExceededError, DimensionMismatchError, SweepFailedError
from .geometry import (DEFAULT_TOL, Deficient, Hyperplane, canonicalize, dot,
                       hyperplane_through)
from .shapes import GridMeasure, ShapeSpec, discretize, fine_masses, rasterize

ENUMERATE_ATOM_CAP = 400
CIRCLE_DIRECTIONS = 720
SPHERE_DIRECTIONS = 1000
CUM_SLACK = 1e-12
DIRECTION_CHUNK = 64


# -- median intervals -------------------------------------------------------

def median_offset_interval(mu: AtomicMeasure, u):
    """Closed interval of offsets ``c`` for which ``(u, c)`` bisects ``mu``.

    Offsets are in the units of ``u`` as given (divide by ``|u|`` for
    Euclidean offsets). The endpoints are projections of atoms. Mass
    comparisons are exact, also for float input.
    """
    u = tuple(u)
    if all(a == 0 for a in u):
        raise ValueError("direction must be nonzero")
    if len(u) != mu.dim:
        raise DimensionMismatchError("direction and measure dimensions differ")
    proj = [dot(u, p) for p in mu.points]
    masses = [Fraction(m) for m in mu.masses]
    tot = sum(masses)
    groups = {}
    for t, m in zip(proj, masses):
        groups[t] = groups.get(t, 0) + m
    values = sorted(groups)
    cum = Fraction(0)
    hi = None
    for t in values:
        cum += groups[t]
        if 2 * cum > tot:
            hi = t
            break
    cum = Fraction(0)
    lo = None
    for t in reversed(values):
        cum += groups[t]
        if 2 * cum > tot:
            lo = t
            break
    return lo, hi


def _median_bounds(P, w, tot):
    """Vectorized median intervals, one row of projections per direction.

    Returns lo, hi and the atom indices realizing them. Comparisons against
    half the mass carry a tiny relative slack so exact ties survive the
    rounding of cumulative sums; results are re-verified downstream.
    """
    order = np.argsort(P, axis=1, kind="stable")
    Ps = np.take_along_axis(P, order, axis=1)
    W = w[order]
    cum = np.cumsum(W, axis=1)
    thresh = tot * (1 + CUM_SLACK)
    hi_pos = np.argmax(2 * cum > thresh, axis=1)
    suffix = tot - cum + W
    over = 2 * suffix > thresh
    lo_pos = over.shape[1] - 1 - np.argmax(over[:, ::-1], axis=1)
    rows = np.arange(P.shape[0])
    return (Ps[rows, lo_pos], Ps[rows, hi_pos],
            order[rows, lo_pos], order[rows, hi_pos])


# -- direction grids ----------------------------------------------------------

def circle_directions(count=CIRCLE_DIRECTIONS):
    """Unit normals at angles k*pi/count, k = 0..count-1 (half circle)."""
    theta = np.arange(count) * (math.pi / count)
    dirs = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    dirs[np.abs(dirs) < 1e-15] = 0.0
    return dirs


def _canonical_hemisphere(v, eps=1e-12):
    for a in v:
        if abs(a) > eps:
            return v if a > 0 else -v
    return v


def geodesic_directions(min_count=SPHERE_DIRECTIONS):
    """Icosahedral geodesic grid restricted to one hemisphere (>= min_count)."""
    t = (1 + math.sqrt(5)) / 2
    verts = [(-1, t, 0), (1, t, 0), (-1, -t, 0), (1, -t, 0),
             (0, -1, t), (0, 1, t), (0, -1, -t), (0, 1, -t),
             (t, 0, -1), (t, 0, 1), (-t, 0, -1), (-t, 0, 1)]
    faces = [(0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
             (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
             (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
             (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1)]
    pts = [np.asarray(v, float) / np.linalg.norm(v) for v in verts]
    while True:
        uniq = {}
        for p in pts:
            q = _canonical_hemisphere(p)
            uniq.setdefault(tuple(np.round(q, 9)), q)
        if len(uniq) >= min_count:
            return np.array([uniq[k] for k in sorted(uniq)])
        index = {tuple(np.round(p, 12)): i for i, p in enumerate(pts)}
        cache = {}

        def midpoint(i, j):
            key = (min(i, j), max(i, j))
            if key not in cache:
                m = pts[i] + pts[j]
                m = m / np.linalg.norm(m)
                k = index.setdefault(tuple(np.round(m, 12)), len(pts))
                if k == len(pts):
                    pts.append(m)
                cache[key] = k
            return cache[key]

        new_faces = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new_faces


# -- level data ------------------------------------------------------------------

class _LevelData:
    """Atoms of one refinement level in array form."""

    def __init__(self, grids, shapes, eps, tol):
        self.grids = grids
        self.shapes = shapes
        self.eps = eps
        self.tol = tol
        self.atoms = [discretize(g) for g in grids]
        self.X = [np.asarray(a.points, dtype=float) for a in self.atoms]
        self.w = [np.asarray(a.masses, dtype=float) for a in self.atoms]
        self.tot = [a.total_mass for a in self.atoms]
        self.n = grids[0].dim

    def bounds(self, dirs):
        out = []
        for X, w, tot in zip(self.X, self.w, self.tot):
            out.append(_median_bounds(dirs @ X.T, w, tot))
        return out

    def bisects_all(self, u, c):
        u = np.asarray(u, float)
        norm = np.linalg.norm(u)
        for X, w, tot in zip(self.X, self.w, self.tot):
            r = X @ u - c
            plus = math.fsum(w[r > self.tol * norm])
            minus = math.fsum(w[r < -self.tol * norm])
            if 2 * plus > tot or 2 * minus > tot:
                return False
        return True

    def atom_distances(self, u, c):
        return [float(np.abs(X @ u - c).min()) for X in self.X]


@dataclass
class _Candidate:
    score: float
    u: np.ndarray
    c: float
    origin: str
    order: tuple = ()


def _touch_offset(proj_sorted, L, R):
    """Offset in [L, R] minimizing the largest distance to any measure's atoms."""
    cands = [np.linspace(L, R, 33)]
    for P in proj_sorted:
        a = np.searchsorted(P, L, side="left")
        b = np.searchsorted(P, R, side="right")
        inside = P[a:b]
        if len(inside) > 256:
            inside = inside[np.linspace(0, len(inside) - 1, 256).astype(int)]
        cands.append(inside)
    c = np.unique(np.concatenate(cands))
    c = c[(c >= L) & (c <= R)]
    f = np.zeros_like(c)
    for P in proj_sorted:
        k = np.clip(np.searchsorted(P, c), 1, len(P) - 1) if len(P) > 1 else np.zeros(len(c), int)
        if len(P) == 1:
            d = np.abs(P[0] - c)
        else:
            d = np.minimum(np.abs(P[k] - c), np.abs(P[k - 1] - c))
        f = np.maximum(f, d)
    best = f.min()
    ties = np.flatnonzero(f <= best + 1e-12 * max(1.0, abs(best)))
    mid = 0.5 * (L + R)
    pick = min(ties, key=lambda i: (abs(c[i] - mid), c[i]))
    return float(f[pick]), float(c[pick])


def _evaluate_directions(data: _LevelData, dirs, start_index, origin):
    """Accepted candidates among ``dirs`` plus the raw median bounds."""
    bounds = data.bounds(dirs)
    lo = np.max(np.stack([b[0] for b in bounds]), axis=0)
    hi = np.min(np.stack([b[1] for b in bounds]), axis=0)
    out = []
    for k in np.flatnonzero(lo <= hi):
        u = dirs[k]
        proj = [np.sort(X @ u) for X in data.X]
        score, c = _touch_offset(proj, lo[k], hi[k])
        if not data.bisects_all(u, c):
            continue
        out.append(_Candidate(score, u, c, origin, (start_index + int(k),)))
    return out, bounds


def _snap(data: _LevelData, endpoint_sets):
    """Planes through one median-endpoint atom per measure that bisect all."""
    found = []
    for combo in itertools.product(*endpoint_sets):
        pts = [tuple(data.X[i][j]) for i, j in enumerate(combo)]
        H = hyperplane_through(pts)
        if isinstance(H, Deficient):
            continue
        u = np.asarray(H.normal)
        c = H.offset
        if data.bisects_all(u, c):
            score = max(data.atom_distances(u, c))
            found.append(_Candidate(score, u, c, "snap", combo))
    return found


def _sign_2d(bounds, k):
    (lo0, hi0, *_), (lo1, hi1, *_) = bounds
    if lo0[k] > hi1[k]:
        return 1
    if lo1[k] > hi0[k]:
        return -1
    return 0


def _angle_dir(theta):
    return np.array([[math.cos(theta), math.sin(theta)]])


def _bracket_2d(data: _LevelData, signs, count):
    """Bisect the angle across a sign change of the median ordering."""
    step = math.pi / count
    nz = [k for k in range(count) if signs[k] != 0]
    pairs = []
    for a, b in zip(nz, nz[1:] + [nz[0] + count] if nz else []):
        sa = signs[a]
        sb = signs[b % count] * (-1 if b >= count else 1)
        if sa * sb < 0:
            pairs.append((a * step, b * step, sa))
    results = []
    for tl, tr, sl in pairs[:4]:
        for _ in range(200):
            if tr - tl < 1e-15:
                break
            tm = 0.5 * (tl + tr)
            b = data.bounds(_angle_dir(tm))
            s = _sign_2d(b, 0)
            if s == 0:
                tl = tr = tm
                break
            if s == sl:
                tl = tm
            else:
                tr = tm
        ends = [data.bounds(_angle_dir(t)) for t in {tl, tr}]
        sets = [sorted({int(e[i][2][0]) for e in ends} | {int(e[i][3][0]) for e in ends})
                for i in range(2)]
        results.extend(_snap(data, sets))
        u = _angle_dir(tl)
        cands, _ = _evaluate_directions(data, u, -1, "bracket")
        results.extend(cands)
        if any(r.score <= data.eps for r in results):
            break
    return results


def _gap(bounds, k):
    return max(b[0][k] for b in bounds) - min(b[1][k] for b in bounds)


def _descend_sphere(data: _LevelData, u0, r0, rounds=400):
    """Pattern search on the sphere for a direction with a common median."""
    u = u0 / np.linalg.norm(u0)
    g = _gap(data.bounds(u[None, :]), 0)
    r = r0
    offsets = [(a, b) for a in (-1, 0, 1) for b in (-1, 0, 1) if (a, b) != (0, 0)]
    for _ in range(rounds):
        if g <= 0 or r < 1e-13:
            break
        t1 = np.cross(u, [1.0, 0, 0] if abs(u[0]) < 0.9 else [0, 1.0, 0])
        t1 /= np.linalg.norm(t1)
        t2 = np.cross(u, t1)
        trial = np.array([u + r * (a * t1 + b * t2) for a, b in offsets])
        trial /= np.linalg.norm(trial, axis=1)[:, None]
        b = data.bounds(trial)
        gaps = [_gap(b, k) for k in range(len(trial))]
        k = int(np.argmin(gaps))
        if gaps[k] < g:
            u, g = trial[k], gaps[k]
        else:
            r /= 3
    return u


# -- records ---------------------------------------------------------------------

@dataclass
class LevelRecord:
    eps: float
    h: float
    hyperplane: Hyperplane
    strategy: str
    totals: list
    side_masses: list
    atom_side_masses: list
    slab_masses: list
    support_distances: list
    centroid_distances: list
    incidence: bool
    touch_ok: bool
    bisect_ok: bool


@dataclass
class ConvergenceTrace:
    levels: list = field(default_factory=list)
    hyperplane: Optional[Hyperplane] = None
    converged: bool = False
    angle_residual: float = math.inf
    offset_residual: float = math.inf


def plane_distance_to_cells(grid: GridMeasure, u, c):
    """Distance from the plane (unit ``u``, ``c``) to the nearest loaded cube."""
    idx, _ = grid.loaded_cells()
    centers = grid.centers(idx)
    gap = np.abs(centers @ u - c) - 0.5 * grid.h * np.abs(u).sum()
    return float(max(0.0, gap.min()))


def slab_mass(grid: GridMeasure, u, c, eps):
    """Mass of the loaded cubes lying within distance ``eps`` of the plane."""
    idx, masses = grid.loaded_cells()
    centers = grid.centers(idx)
    gap = np.abs(centers @ u - c) - 0.5 * grid.h * np.abs(u).sum()
    return math.fsum(masses[gap < eps])


def estimate_side_masses(shape: Optional[ShapeSpec], grid: GridMeasure, u, c, tol):
    """(minus, on, plus) of the underlying measure, resolved below cell size.

    With a shape available the sub-cell masses from rasterization are
    classified individually; for a bare grid the cell centroids are used.
    """
    if shape is not None:
        s = grid.supersample
        origin, dims, fine = fine_masses(shape, grid.h, s,
                                         frame=(grid.origin, grid.dims))
        hf = grid.h / s
        idx = np.argwhere(fine > 0)
        m = fine[tuple(idx.T)]
        r = (np.asarray(origin) + (idx + 0.5) * hf) @ u - c
    else:
        idx, m = grid.loaded_cells()
        r = grid.centers(idx) @ u - c
    return (math.fsum(m[r < -tol]), math.fsum(m[np.abs(r) <= tol]), math.fsum(m[r > tol]))


# -- driver ----------------------------------------------------------------------

def cell_size_for(eps, n):
    """Largest power-of-two cell size whose cube diameter is below ``eps``."""
    h = 2.0 ** math.floor(math.log2(eps / math.sqrt(n)))
    while h * math.sqrt(n) >= eps:
        h /= 2
    return h


def _sweep_level(data: _LevelData, dirs, workers):
    count = len(dirs)
    chunks = [(i, dirs[i:i + DIRECTION_CHUNK]) for i in range(0, count, DIRECTION_CHUNK)]
    run = lambda item: _evaluate_directions(data, item[1], item[0], "grid")
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(run, chunks))
    else:
        results = [run(item) for item in chunks]
    accepted = [c for cands, _ in results for c in cands]
    bounds = [tuple(np.concatenate([r[1][i][j] for r in results]) for j in range(4))
              for i in range(data.n)]
    good = [c for c in accepted if c.score <= data.eps]
    if good:
        best = min(good, key=lambda c: (c.score, c.order))
        # local refinement at a third of the grid spacing
        if data.n == 2:
            theta = best.order[0] * math.pi / count
            step = math.pi / count / 3
            fine = np.array([[math.cos(theta + k * step), math.sin(theta + k * step)]
                             for k in (-2, -1, 1, 2)])
            extra, _ = _evaluate_directions(data, fine, count, "refine")
            good += [c for c in extra if c.score <= data.eps]
        return min(good, key=lambda c: (c.score, c.order))
    extra = []
    if data.n == 2:
        signs = [_sign_2d(bounds, k) for k in range(count)]
        extra = _bracket_2d(data, signs, count)
    else:
        gaps = np.max(np.stack([b[0] for b in bounds]), 0) - np.min(np.stack([b[1] for b in bounds]), 0)
        for k in np.argsort(gaps, kind="stable")[:3]:
            u = _descend_sphere(data, dirs[k], 0.1)
            b = data.bounds(u[None, :])
            sets = [sorted({int(b[i][2][0]), int(b[i][3][0])}) for i in range(data.n)]
            extra += _snap(data, sets)
            cands, _ = _evaluate_directions(data, u[None, :], count + int(k), "descent")
            extra += cands
            if any(c.score <= data.eps for c in extra):
                break
    good = [c for c in extra if c.score <= data.eps]
    if not good:
        raise SweepFailedError(
            f"no sampled direction admits a common touching median at eps={data.eps}",
            level=data.eps)
    return min(good, key=lambda c: (c.score, c.order))


def _enumerate_level(data: _LevelData, workers):
    for a in data.atoms:
        if len(a) > ENUMERATE_ATOM_CAP:
            raise CapExceededError(
                f"measure {a.name!r} has {len(a)} atoms; enumerate allows {ENUMERATE_ATOM_CAP}")
    exact = Instance(tuple(
        AtomicMeasure(tuple(tuple(Fraction(v) for v in p) for p in a.points),
                      tuple(Fraction(m) for m in a.masses), a.name)
        for a in data.atoms))
    sol = solve_touching_cut(exact, workers=workers)
    H = sol.hyperplane.unit()
    u = np.asarray(H.normal)
    return _Candidate(0.0, u, H.offset, "enumerate", sol.witness_tuple)


def _as_inputs(inputs):
    shapes, grids = [], []
    for item in inputs:
        if isinstance(item, ShapeSpec):
            shapes.append(item)
            grids.append(None)
        elif isinstance(item, GridMeasure):
            shapes.append(None)
            grids.append(item)
        else:
            raise TypeError(f"expected ShapeSpec or GridMeasure, got {type(item).__name__}")
    return shapes, grids


def solve_measure_cut(inputs: Sequence, schedule: Sequence[float], strategy="sweep",
                      workers=None, tol=DEFAULT_TOL, tol_conv=1e-3, supersample=4,
                      directions=None):
    """Refine toward a plane that bisects every measure and meets every support.

    Returns ``(Solution, ConvergenceTrace)``. The solution's hyperplane is the
    canonical plane of the last level; its report judges bisection on the
    finest centroid atoms and touching by the distance to the nearest loaded
    cell (at most the finest ``eps``).
    """
    shapes, grids = _as_inputs(inputs)
    dims = {(s or g).dim for s, g in zip(shapes, grids)}
    if len(dims) != 1:
        raise DimensionMismatchError("inputs of mixed dimension")
    n = dims.pop()
    if len(inputs) != n:
        raise DimensionMismatchError(f"{len(inputs)} inputs given in R^{n}; need exactly {n}")
    schedule = [float(e) for e in schedule]
    if not schedule or any(e <= 0 for e in schedule):
        raise ValueError("schedule must be a nonempty list of positive values")
    if any(b >= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("schedule must be strictly decreasing")
    if strategy not in ("sweep", "enumerate"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if strategy == "sweep" and n not in (2, 3):
        raise ValueError("the sweep strategy supports R^2 and R^3 only; use enumerate")
    workers = resolve_workers(workers)
    if directions is None and strategy == "sweep":
        directions = circle_directions() if n == 2 else geodesic_directions()

    trace = ConvergenceTrace()
    diag = Diagnostics(stage=strategy)
    best = data = None
    for eps in schedule:
        h = cell_size_for(eps, n)
        level_grids = []
        for s, g in zip(shapes, grids):
            if s is not None:
                level_grids.append(rasterize(s, h, supersample))
            else:
                if g.cell_diameter >= eps:
                    raise ValueError(f"grid {g.name!r} is too coarse for eps={eps}")
                level_grids.append(g)
        data = _LevelData(level_grids, shapes, eps, tol)
        if strategy == "sweep":
            best = _sweep_level(data, directions, workers)
        else:
            best = _enumerate_level(data, workers)
        diag.candidates += 1
        trace.levels.append(_record(data, best, strategy))

    last = trace.levels[-1]
    trace.hyperplane = last.hyperplane
    if len(trace.levels) >= 2:
        ang, off = plane_residuals(trace.levels[-2].hyperplane, last.hyperplane)
        trace.angle_residual, trace.offset_residual = ang, off
        trace.converged = ang < tol_conv and off < tol_conv

    report = evaluate_cut(data.atoms, last.hyperplane, tol)
    for mc, dist in zip(report.measures, last.support_distances):
        mc.support_distance = dist
        mc.touched = dist < data.eps
    witness = None
    if last.incidence:
        witness = tuple(mc.witness_index for mc in evaluate_cut(data.atoms, last.hyperplane, tol).measures)
    return Solution(last.hyperplane, report, witness, diag), trace


def plane_residuals(H1: Hyperplane, H2: Hyperplane):
    """Angle between normals and offset gap, after aligning orientations."""
    u1, u2 = np.asarray(H1.unit().normal), np.asarray(H2.unit().normal)
    c1, c2 = H1.unit().offset, H2.unit().offset
    if u1 @ u2 < 0:
        u2, c2 = -u2, -c2
    ang = float(np.arccos(np.clip(u1 @ u2, -1.0, 1.0)))
    return ang, abs(c1 - c2)


def _record(data: _LevelData, cand: _Candidate, strategy) -> LevelRecord:
    u = np.asarray(cand.u, float)
    norm = np.linalg.norm(u)
    u, c = u / norm, float(cand.c) / norm
    H = canonicalize(Hyperplane(tuple(float(v) for v in u), c))
    u, c = np.asarray(H.normal), H.offset
    side, atom_side, slabs, supp, cent = [], [], [], [], []
    incidence = True
    for shape, grid, X, w in zip(data.shapes, data.grids, data.X, data.w):
        side.append(estimate_side_masses(shape, grid, u, c, data.tol))
        r = X @ u - c
        on = np.abs(r) <= data.tol
        incidence &= bool(on.any())
        atom_side.append((math.fsum(w[r < -data.tol]), math.fsum(w[on]),
                          math.fsum(w[r > data.tol])))
        slabs.append(slab_mass(grid, u, c, data.eps))
        supp.append(plane_distance_to_cells(grid, u, c))
        cent.append(float(np.abs(r).min()))
    totals = list(data.tot)
    bisect_ok = all(
        2 * max(sm[0], sm[2]) <= tot + 2 * slab + 1e-12 * tot
        for sm, slab, tot in zip(side, slabs, totals))
    touch_ok = all(d < data.eps for d in supp)
    return LevelRecord(
        eps=data.eps, h=data.grids[0].h, hyperplane=H,
        strategy=cand.origin if strategy == "sweep" else strategy,
        totals=totals, side_masses=side, atom_side_masses=atom_side,
        slab_masses=slabs, support_distances=supp, centroid_distances=cent,
        incidence=incidence, touch_ok=touch_ok, bisect_ok=bisect_ok)
