"""Touching bisectors for n finite atomic measures in R^n.

The search looks only at hyperplanes that pass through one atom of every
measure. In general position those are the affine hulls of atom tuples, so
enumerating tuples in lexicographic index order and testing each spanned
hyperplane is complete. Degenerate tuples (affine hull of dimension < n-1)
leave a family of containing hyperplanes; a one-parameter family (a pencil)
is swept exactly at its critical positions, larger families go through a
symbolic point perturbation followed by re-verification on the original
atoms.

All arithmetic is exact. Coordinates and masses are rescaled to integers
once per instance; a uniform scaling does not change any side test.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key, reduce
from typing import Iterator, Optional

from .bisection import AtomicMeasure, CutReport, evaluate_cut
from .errors import CapExceededError, DimensionMismatchError, RetryLimitError
from .geometry import Hyperplane, canonicalize, nullspace, rref

CHUNK = 256
ENUMERATION_CAP = 10**6
PERTURB_ATOM_CAP = 20
PERTURB_EXPONENTS = (10, 20, 30, 40, 50)


@dataclass(frozen=True)
class Instance:
    measures: tuple

    def __post_init__(self):
        measures = tuple(self.measures)
        if not measures:
            raise ValueError("an instance needs at least one measure")
        n = measures[0].dim
        if any(mu.dim != n for mu in measures):
            raise DimensionMismatchError("measures of mixed dimension")
        if len(measures) != n:
            raise DimensionMismatchError(
                f"{len(measures)} measures given in R^{n}; need exactly {n}")
        object.__setattr__(self, "measures", measures)

    @property
    def dim(self) -> int:
        return self.measures[0].dim

    @classmethod
    def from_sets(cls, *point_sets, names=None):
        """Counting-measure instance: every point gets mass 1."""
        names = names or [chr(ord("A") + i) for i in range(len(point_sets))]
        return cls(tuple(AtomicMeasure.uniform(
            [tuple(Fraction(c) for c in p) for p in pts], name)
            for pts, name in zip(point_sets, names)))


@dataclass
class Diagnostics:
    candidates: int = 0
    completions: int = 0
    perturbation_retries: int = 0
    stage: str = ""


@dataclass
class Solution:
    hyperplane: Hyperplane
    report: CutReport
    witness_tuple: Optional[tuple]
    diagnostics: Diagnostics = field(default_factory=Diagnostics)


def resolve_workers(workers=None) -> int:
    if workers is None:
        workers = int(os.environ.get("MAYOCUT_THREADS", "1") or 1)
    return max(1, int(workers))


# -- integer working copy ---------------------------------------------------

def _lcm(a, b):
    return a * b // math.gcd(a, b)


def _primitive(normal, c):
    """Primitive integer normal, first nonzero component positive."""
    g = reduce(math.gcd, (abs(a) for a in normal), 0)
    lead = next(a for a in normal if a != 0)
    if lead < 0:
        g = -g
    return tuple(a // g for a in normal), c // g


class _IntProblem:
    """Integer-scaled copy of an instance; points[i][j] = scale * atom j of measure i."""

    def __init__(self, points, masses, scale):
        self.points = points
        self.masses = masses
        self.totals = [sum(m) for m in masses]
        self.scale = scale
        self.n = len(points[0][0])
        seen = {}
        for pts in points:
            for p in pts:
                seen.setdefault(p, None)
        self.union = list(seen)

    @classmethod
    def from_instance(cls, inst: Instance):
        coords = [Fraction(c) for mu in inst.measures for p in mu.points for c in p]
        scale = reduce(_lcm, (c.denominator for c in coords), 1)
        points = [[tuple(int(Fraction(c) * scale) for c in p) for p in mu.points]
                  for mu in inst.measures]
        masses = []
        for mu in inst.measures:
            fr = [Fraction(m) for m in mu.masses]
            den = reduce(_lcm, (m.denominator for m in fr), 1)
            masses.append([int(m * den) for m in fr])
        return cls(points, masses, scale)

    def bisects_all(self, normal, c) -> bool:
        n = self.n
        for pts, ms, tot in zip(self.points, self.masses, self.totals):
            plus = minus = 0
            if n == 2:
                u0, u1 = normal
                for (x, y), m in zip(pts, ms):
                    r = u0 * x + u1 * y - c
                    if r > 0:
                        plus += m
                        if 2 * plus > tot:
                            return False
                    elif r < 0:
                        minus += m
                        if 2 * minus > tot:
                            return False
            else:
                for p, m in zip(pts, ms):
                    r = sum(a * b for a, b in zip(normal, p)) - c
                    if r > 0:
                        plus += m
                        if 2 * plus > tot:
                            return False
                    elif r < 0:
                        minus += m
                        if 2 * minus > tot:
                            return False
        return True

    def excess(self, normal, c):
        """Largest relative overshoot of an open side over half the mass."""
        worst = Fraction(0)
        for pts, ms, tot in zip(self.points, self.masses, self.totals):
            plus = minus = 0
            for p, m in zip(pts, ms):
                r = sum(a * b for a, b in zip(normal, p)) - c
                if r > 0:
                    plus += m
                elif r < 0:
                    minus += m
            worst = max(worst, Fraction(2 * max(plus, minus) - tot, tot))
        return worst

    def tuple_points(self, idx):
        return [self.points[i][j] for i, j in enumerate(idx)]

    def to_hyperplane(self, normal, c) -> Hyperplane:
        return canonicalize(Hyperplane(tuple(normal), Fraction(c, self.scale)))


def _span_normal(pts):
    """Integer normal of the hyperplane through n integer points, or None."""
    p0 = pts[0]
    n = len(p0)
    if n == 2:
        dx = pts[1][0] - p0[0]
        dy = pts[1][1] - p0[1]
        if dx == 0 and dy == 0:
            return None
        return (-dy, dx)
    if n == 3:
        a = [pts[1][k] - p0[k] for k in range(3)]
        b = [pts[2][k] - p0[k] for k in range(3)]
        normal = (a[1] * b[2] - a[2] * b[1],
                  a[2] * b[0] - a[0] * b[2],
                  a[0] * b[1] - a[1] * b[0])
        if normal == (0, 0, 0):
            return None
        return normal
    if n == 1:
        return (1,)
    diffs = [[p[k] - p0[k] for k in range(n)] for p in pts[1:]]
    if len(rref(diffs)[1]) < n - 1:
        return None
    return nullspace(diffs, n)[0]


def _affine_dim(pts) -> int:
    p0 = pts[0]
    diffs = [[p[k] - p0[k] for k in range(len(p0))] for p in pts[1:]]
    return len(rref(diffs)[1]) if diffs else 0


def _dot(u, x):
    return sum(a * b for a, b in zip(u, x))


# -- degeneracy completion ------------------------------------------------

def _angle_cmp(d, e):
    # both in the upper half-plane (beta > 0, or beta == 0 and alpha > 0)
    cross = d[0] * e[1] - d[1] * e[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def _orient(alpha, beta):
    g = math.gcd(alpha, beta)
    alpha, beta = alpha // g, beta // g
    if beta < 0 or (beta == 0 and alpha < 0):
        alpha, beta = -alpha, -beta
    return alpha, beta


def pencil_samples(base, atoms):
    """Hyperplanes of the pencil through ``base`` worth testing, as (normal, c).

    ``base`` must span an affine subspace of dimension n-2. Critical positions
    (the pencil member through some further atom) come first in angular
    order, then one interior representative per open arc between them.
    """
    p0 = base[0]
    n = len(p0)
    diffs = [[p[k] - p0[k] for k in range(n)] for p in base[1:]]
    w1, w2 = nullspace(diffs, n) if diffs else nullspace([[0] * n], n)
    dirs = set()
    for x in atoms:
        rel = [x[k] - p0[k] for k in range(n)]
        a, b = _dot(w1, rel), _dot(w2, rel)
        if a == 0 and b == 0:
            continue
        dirs.add(_orient(-b, a))
    ordered = sorted(dirs, key=cmp_to_key(_angle_cmp))
    coeffs = list(ordered)
    if len(ordered) == 0:
        coeffs = [(1, 0)]
    elif len(ordered) == 1:
        a, b = ordered[0]
        coeffs.append((-b, a))
    else:
        for d, e in zip(ordered, ordered[1:]):
            coeffs.append((d[0] + e[0], d[1] + e[1]))
        d, e = ordered[-1], ordered[0]
        coeffs.append((d[0] - e[0], d[1] - e[1]))
    out = []
    for alpha, beta in coeffs:
        normal = tuple(alpha * s + beta * t for s, t in zip(w1, w2))
        out.append(_primitive(normal, _dot(normal, p0)))
    return out


def family_samples(base, atoms, _seen=None):
    """Finite sample of the hyperplanes containing ``base`` (any degeneracy).

    Every bisecting member of the family has a bisecting sample: moving a
    hyperplane onto the boundary of its cell in the atom arrangement only
    moves atoms onto it, which never increases an open-side mass.
    """
    seen = set() if _seen is None else _seen
    n = len(base[0])
    d = _affine_dim(base)
    if d >= n - 1:
        basis = _independent(base)
        normal = _span_normal(basis)
        cands = [_primitive(normal, _dot(normal, base[0]))]
    elif d == n - 2:
        cands = pencil_samples(_independent(base), atoms)
    else:
        basis = _independent(base)
        outside = [x for x in atoms if _affine_dim(basis + [x]) > d]
        if not outside:
            p0 = base[0]
            diffs = [[p[k] - p0[k] for k in range(n)] for p in basis[1:]]
            w = nullspace(diffs or [[0] * n], n)[0]
            cands = [_primitive(w, _dot(w, p0))]
        else:
            cands = []
            for x in outside:
                cands.extend(family_samples(basis + [x], atoms, seen))
            return cands
    fresh = []
    for cand in cands:
        if cand not in seen:
            seen.add(cand)
            fresh.append(cand)
    return fresh


def _independent(pts):
    """Affinely independent subset with the same affine hull (keeps order)."""
    basis = [pts[0]]
    d = 0
    for p in pts[1:]:
        if _affine_dim(basis + [p]) > d:
            basis.append(p)
            d += 1
    return basis


# -- search -----------------------------------------------------------------

def _chunks(it, size):
    it = iter(it)
    while True:
        block = list(itertools.islice(it, size))
        if not block:
            return
        yield block


def _scan_full_rank(prob: _IntProblem, block):
    """First spanning tuple in ``block`` whose hyperplane bisects everything."""
    deficient = []
    for k, idx in enumerate(block):
        pts = prob.tuple_points(idx)
        normal = _span_normal(pts)
        if normal is None:
            deficient.append(idx)
            continue
        c = _dot(normal, pts[0])
        if prob.bisects_all(normal, c):
            return k, idx, _primitive(normal, c), deficient
    return None, None, None, deficient


def _search(prob: _IntProblem, workers: int, diag: Diagnostics):
    """Stages 1 and 2: spanning tuples, then pencil completion."""
    sizes = [range(len(p)) for p in prob.points]
    deficient = []
    scanned = 0
    blocks = _chunks(itertools.product(*sizes), CHUNK)
    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        while True:
            wave = list(itertools.islice(blocks, workers))
            if not wave:
                break
            if pool is None:
                results = [_scan_full_rank(prob, wave[0])]
            else:
                results = list(pool.map(lambda b: _scan_full_rank(prob, b), wave))
            for block, (k, idx, plane, defs) in zip(wave, results):
                deficient.extend(defs)
                if idx is not None:
                    diag.candidates = scanned + k + 1
                    diag.stage = "full-rank"
                    return idx, plane
                scanned += len(block)
    finally:
        if pool is not None:
            pool.shutdown()
    diag.candidates = scanned
    n = prob.n
    for idx in deficient:
        pts = prob.tuple_points(idx)
        if _affine_dim(pts) != n - 2:
            continue
        diag.completions += 1
        for normal, c in pencil_samples(_independent(pts), prob.union):
            diag.candidates += 1
            if prob.bisects_all(normal, c):
                diag.stage = "pencil"
                return idx, (normal, c)
    return None, deficient


def _perturbed(prob: _IntProblem, t: int) -> _IntProblem:
    n = prob.n
    big = max(len(p) for p in prob.points)
    kmax = len(prob.points) * big + 1
    factor = 2**t * kmax**n
    points = []
    for i, pts in enumerate(prob.points):
        row = []
        for j, p in enumerate(pts):
            k = i * big + j + 1
            row.append(tuple(factor * p[e] + k ** (e + 1) for e in range(n)))
        points.append(row)
    return _IntProblem(points, prob.masses, prob.scale * factor)


def _finish(inst, prob, idx, plane, diag) -> Solution:
    H = prob.to_hyperplane(*plane)
    report = evaluate_cut(inst.measures, H, 0)
    if not report.ok:
        raise AssertionError(f"internal check disagrees with evaluate_cut for {H}")
    return Solution(H, report, tuple(idx), diag)


def solve_touching_cut(inst: Instance, workers=None) -> Solution:
    """Hyperplane bisecting every measure and containing an atom of each.

    Returns the success with the smallest lexicographic atom-index tuple among
    spanning tuples; degenerate completions are only consulted afterwards.
    Raises ``RetryLimitError`` if every stage fails, which should not happen
    for valid input.
    """
    if not isinstance(inst, Instance):
        inst = Instance(tuple(inst))
    workers = resolve_workers(workers)
    prob = _IntProblem.from_instance(inst)
    diag = Diagnostics()
    idx, found = _search(prob, workers, diag)
    if idx is not None:
        return _finish(inst, prob, idx, found, diag)
    deficient = found
    n = prob.n

    for attempt, t in enumerate(PERTURB_EXPONENTS, start=1):
        diag.perturbation_retries = attempt
        pidx, _ = _search(_perturbed(prob, t), 1, Diagnostics())
        if pidx is None:
            continue
        pts = prob.tuple_points(pidx)
        for normal, c in family_samples(pts, prob.union):
            diag.candidates += 1
            if prob.bisects_all(normal, c):
                diag.stage = "perturbation"
                return _finish(inst, prob, pidx, (normal, c), diag)

    # last resort: walk every larger degenerate family exactly
    for idx in deficient:
        pts = prob.tuple_points(idx)
        if _affine_dim(pts) >= n - 2:
            continue
        diag.completions += 1
        for normal, c in family_samples(pts, prob.union):
            diag.candidates += 1
            if prob.bisects_all(normal, c):
                diag.stage = "exhaustive"
                return _finish(inst, prob, idx, (normal, c), diag)

    nearest = _nearest_miss(prob)
    raise RetryLimitError(
        f"no touching bisector found after {len(PERTURB_EXPONENTS)} perturbation retries",
        diagnostics=diag, nearest_miss=nearest)


def _nearest_miss(prob: _IntProblem):
    best = None
    for idx in itertools.product(*[range(len(p)) for p in prob.points]):
        normal = _span_normal(prob.tuple_points(idx))
        if normal is None:
            continue
        c = _dot(normal, prob.tuple_points(idx)[0])
        score = prob.excess(normal, c)
        if best is None or score < best[0]:
            best = (score, idx, prob.to_hyperplane(normal, c))
    return best


def iter_cuts(inst: Instance, cap=ENUMERATION_CAP) -> Iterator[Solution]:
    prob = _IntProblem.from_instance(inst)
    size = math.prod(len(p) for p in prob.points)
    if size > cap:
        raise CapExceededError(f"{size} atom tuples exceed the enumeration cap {cap}")
    seen = set()
    for idx in itertools.product(*[range(len(p)) for p in prob.points]):
        pts = prob.tuple_points(idx)
        normal = _span_normal(pts)
        if normal is not None:
            cands = [_primitive(normal, _dot(normal, pts[0]))]
        else:
            cands = family_samples(pts, prob.union)
        for cand in cands:
            if cand in seen:
                continue
            seen.add(cand)
            if prob.bisects_all(*cand):
                yield _finish(inst, prob, idx, cand, Diagnostics(stage="enumerate"))


def enumerate_all_cuts(inst: Instance, cap=ENUMERATION_CAP) -> list:
    """Every sampled touching bisector, one Solution per canonical hyperplane."""
    if not isinstance(inst, Instance):
        inst = Instance(tuple(inst))
    return list(iter_cuts(inst, cap))


# -- mass perturbation -------------------------------------------------------

def _primes():
    found = []
    k = 2
    while True:
        if all(k % p for p in found if p * p <= k):
            found.append(k)
            yield k
        k += 1


def has_subset_tie(masses) -> bool:
    """True if some subset of ``masses`` sums to exactly half the total."""
    fr = [Fraction(m) for m in masses]
    den = reduce(_lcm, (m.denominator for m in fr), 1)
    ints = [int(m * den) for m in fr]
    tot = sum(ints)
    if tot % 2:
        return False
    sums = {0}
    for m in ints:
        sums |= {s + m for s in sums}
    return tot // 2 in sums


def perturb_masses(mu: AtomicMeasure, eps, cap=PERTURB_ATOM_CAP) -> AtomicMeasure:
    """Lower the smallest atom by ``m_min/p`` (p prime, first that works).

    The result has no subset of atoms weighing exactly as much as its
    complement, so every bisecting hyperplane of it must pass through an atom.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    if not mu.exact:
        raise ValueError("perturb_masses needs exact (rational) masses")
    if len(mu) > cap:
        raise CapExceededError(f"{len(mu)} atoms exceed the subset-check cap {cap}")
    masses = [Fraction(m) for m in mu.masses]
    i = min(range(len(masses)), key=lambda k: (masses[k], k))
    m_min = masses[i]
    for p in _primes():
        delta = m_min / p
        if delta >= eps:
            continue
        trial = list(masses)
        trial[i] = m_min - delta
        if not has_subset_tie(trial):
            return AtomicMeasure(mu.points, tuple(trial), mu.name)
