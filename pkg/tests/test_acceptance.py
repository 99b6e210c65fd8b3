"""Acceptance criteria, one test each. Every test prints a PASS/FAIL line.

Run alone with ``pytest -m acceptance -s``.
"""

import itertools
import json
import math
import random
import time
from fractions import Fraction as F

import numpy as np
import pytest

from mayocut import (AtomicMeasure, Ball, Hyperplane, ShapeSpec, enumerate_all_cuts,
                     median_offset_interval, perturb_masses, rasterize, solve_measure_cut,
                     solve_touching_cut)
from mayocut import io
from mayocut.fixtures import mirror_disks_shapes, disk_between_disks_shapes
from mayocut.oracle import random_instances, verify, verify_grids

from support import (median_interval_brute_force, move_instance, move_plane, rotation_2d,
                     rotation_3d)

pytestmark = pytest.mark.acceptance

SCHEDULE = [0.25, 0.125, 0.0625]


def plane_key(H):
    return (tuple(H.normal), H.offset)


def cube_gaps(grid, H):
    """Distance from each loaded cube to H, computed from scratch."""
    Hu = H.unit()
    u = np.asarray(Hu.normal, float)
    idx = np.argwhere(grid.cell_masses > 0)
    centers = np.asarray(grid.origin) + (idx + 0.5) * grid.h
    r = centers @ u - Hu.offset
    half = 0.5 * grid.h * np.abs(u).sum()
    return r, np.maximum(np.abs(r) - half, 0.0), grid.cell_masses[tuple(idx.T)]


def check_level_bounds(shapes, level):
    """Distance and side-mass bounds for one refinement level, recomputed independently.

    The side masses of the underlying measure are estimated on a grid eight
    times finer than the level grid; the slab is every fine cell within eps.
    """
    problems = []
    H, eps = level.hyperplane, level.eps
    for k, shape in enumerate(shapes):
        coarse = rasterize(shape, level.h)
        _, gap, _ = cube_gaps(coarse, H)
        if not gap.min() < eps:
            problems.append(f"{shape.name}: support distance {gap.min():.4g} >= {eps}")
        fine = rasterize(shape, level.h / 8)
        r, fgap, m = cube_gaps(fine, H)
        tot = math.fsum(m)
        slab = math.fsum(m[fgap < eps])
        for label, side in (("plus", math.fsum(m[r > 0])), ("minus", math.fsum(m[r < 0]))):
            if side > tot / 2 + slab + 1e-12 * tot:
                problems.append(f"{shape.name}: {label} {side:.5g} > {tot / 2:.5g} + {slab:.5g}")
        # the solver's own record must agree with the bound as well
        rec = level.side_masses[k]
        if max(rec[0], rec[2]) > level.totals[k] / 2 + level.slab_masses[k] + 1e-12 * level.totals[k]:
            problems.append(f"{shape.name}: recorded side mass exceeds its bound")
        if not level.support_distances[k] < eps:
            problems.append(f"{shape.name}: recorded support distance not below eps")
    return problems


def two_disk_pairs(seed, count):
    rng = random.Random(seed)

    def disk():
        return Ball((rng.uniform(-3, 3), rng.uniform(-3, 3)), rng.uniform(0.5, 1.5))

    return [[ShapeSpec((disk(), disk()), "A"), ShapeSpec((disk(), disk()), "B")]
            for _ in range(count)]


# -- 1 ------------------------------------------------------------------------

def test_c1_discrete_existence_sweep(criterion):
    start = time.perf_counter()
    failures = []
    corpus = [(2, inst) for inst in random_instances(2024, 500, 2, 12)]
    corpus += [(3, inst) for inst in random_instances(3033, 200, 3, 8)]
    for k, (dim, inst) in enumerate(corpus):
        try:
            sol = solve_touching_cut(inst)
        except Exception as exc:  # any failure is a bug; keep counting
            failures.append(f"#{k} ({dim}D): {exc!r}")
            continue
        if not verify(inst, sol.hyperplane, 0).verdict:
            failures.append(f"#{k} ({dim}D): verify rejected {sol.hyperplane}")
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60
    criterion("1 discrete existence sweep", ok,
              f"{len(corpus) - len(failures)}/{len(corpus)} verified, {elapsed:.1f}s")
    assert not failures, failures[:5]
    assert elapsed < 60


# -- 2 ------------------------------------------------------------------------

def test_c2_oracle_equivalence(criterion):
    corpus = list(random_instances(77, 100, 2, 6))
    small = [inst for inst in corpus if all(len(mu) <= 6 for mu in inst.measures)]
    problems = []
    listed_total = 0
    for k, inst in enumerate(small):
        sol = solve_touching_cut(inst)
        cuts = enumerate_all_cuts(inst)
        listed_total += len(cuts)
        if plane_key(sol.hyperplane) not in {plane_key(c.hyperplane) for c in cuts}:
            problems.append(f"#{k}: {sol.hyperplane} not listed")
        for c in cuts:
            if not verify(inst, c.hyperplane, 0).verdict:
                problems.append(f"#{k}: listed {c.hyperplane} fails verify")
    ok = not problems and len(small) == 100
    criterion("2 oracle equivalence", ok,
              f"{len(small)} instances, {listed_total} listed cuts checked")
    assert ok, problems[:5]


# -- 3 ------------------------------------------------------------------------

def test_c3_mirror_disks_reproduce_the_horizontal_line(criterion):
    start = time.perf_counter()
    sol, trace = solve_measure_cut(mirror_disks_shapes(), SCHEDULE)
    elapsed = time.perf_counter() - start
    H = sol.hyperplane.unit()
    along_x = abs(H.normal[0])
    offset = abs(H.offset)
    ok = along_x <= 0.05 and offset <= 0.05 and elapsed < 30
    criterion("3 mirror-disk reproduction", ok,
              f"|u.(1,0)|={along_x:.3g}, |c|={offset:.3g}, {elapsed:.1f}s")
    assert ok


# -- 4 ------------------------------------------------------------------------

def test_c4_touching_discriminates(criterion):
    shapes = disk_between_disks_shapes()
    sol, trace = solve_measure_cut(shapes, SCHEDULE)
    finest = trace.levels[-1]
    grids = [rasterize(s, finest.h) for s in shapes]
    vertical = verify_grids(grids, Hyperplane((1.0, 0.0), 0.0))
    horizontal = verify_grids(grids, Hyperplane((0.0, 1.0), 0.0))
    reject_ok = vertical.bisected and not vertical.touched and not vertical.verdict
    accept_ok = horizontal.verdict
    problems = check_level_bounds(shapes, finest)
    ok = reject_ok and accept_ok and not problems
    criterion("4 touching discrimination", ok,
              f"x=0 rejected={reject_ok}, y=0 accepted={accept_ok}, "
              f"solver plane {sol.hyperplane}")
    assert ok, problems


# -- 5 ------------------------------------------------------------------------

def test_c5_refinement_bounds(criterion):
    cases = [mirror_disks_shapes(), disk_between_disks_shapes()] + two_disk_pairs(5, 20)
    problems = []
    levels = 0
    for k, shapes in enumerate(cases):
        _, trace = solve_measure_cut(shapes, SCHEDULE)
        for level in trace.levels:
            levels += 1
            problems += [f"case {k}, eps={level.eps}: {p}" for p in check_level_bounds(shapes, level)]
    ok = not problems
    criterion("5 refinement bounds", ok, f"{len(cases)} cases, {levels} levels")
    assert ok, problems[:5]


# -- 6 ------------------------------------------------------------------------

def has_tie_exhaustive(masses):
    tot = sum(masses)
    for mask in range(1 << len(masses)):
        if 2 * sum(m for i, m in enumerate(masses) if mask >> i & 1) == tot:
            return True
    return False


def test_c6_mass_perturbation(criterion):
    rng = random.Random(606)
    problems = []
    for k in range(200):
        size = rng.randint(1, 12)
        masses = [F(rng.randint(1, 12), rng.randint(1, 4)) for _ in range(size)]
        eps = F(rng.randint(1, 10), rng.randint(1, 50))
        mu = AtomicMeasure(tuple((F(i),) for i in range(size)), tuple(masses))
        out = perturb_masses(mu, eps)
        drop = mu.total_mass - out.total_mass
        if has_tie_exhaustive(list(out.masses)):
            problems.append(f"#{k}: tie remains in {out.masses}")
        if not (0 < drop < eps and drop < min(masses)):
            problems.append(f"#{k}: reduction {drop} vs eps {eps}, min {min(masses)}")
    ok = not problems
    criterion("6 mass perturbation", ok, "200 mass lists")
    assert ok, problems[:5]


# -- 7 ------------------------------------------------------------------------

def test_c7_median_interval_oracle(criterion):
    rng = random.Random(707)
    problems = []
    for k in range(300):
        dim = rng.choice((2, 3))
        size = rng.randint(1, 8)
        pts = set()
        while len(pts) < size:
            pts.add(tuple(F(rng.randint(-8, 8), rng.randint(1, 3)) for _ in range(dim)))
        pts = sorted(pts)
        masses = [F(rng.randint(1, 6), rng.randint(1, 3)) for _ in pts]
        u = (0,) * dim
        while not any(u):
            u = tuple(rng.randint(-5, 5) for _ in range(dim))
        mu = AtomicMeasure(tuple(pts), tuple(masses))
        got = median_offset_interval(mu, u)
        want = median_interval_brute_force(pts, masses, u)
        if got != want:
            problems.append(f"#{k}: {got} != {want}")
    ok = not problems
    criterion("7 median-interval oracle", ok, "300 measures")
    assert ok, problems[:5]


# -- 8 ------------------------------------------------------------------------

def discrete_run(workers):
    """Serialized answers plus equivariance verdicts for a fixed corpus."""
    out, broken = [], []
    motions = {2: (rotation_2d(F(2, 5)), (F(3, 2), F(-7, 3))),
               3: (rotation_3d(2, -1, 1), (F(1, 4), F(5), F(-2, 7)))}
    for dim, seed, count, size in ((2, 808, 60, 10), (3, 809, 30, 6)):
        R, t = motions[dim]
        for k, inst in enumerate(random_instances(seed, count, dim, size)):
            sol = solve_touching_cut(inst, workers=workers)
            again = solve_touching_cut(inst, workers=workers)
            moved = solve_touching_cut(move_instance(inst, R, t), workers=workers)
            if io.solution_dict(again) != io.solution_dict(sol):
                broken.append(f"{dim}D #{k}: repeat differs")
            if moved.hyperplane != move_plane(sol.hyperplane, R, t):
                broken.append(f"{dim}D #{k}: not equivariant")
            out.append(io.solution_dict(sol))
    return json.dumps(out, sort_keys=True), broken


def measure_run(workers):
    out = []
    for shapes in (mirror_disks_shapes(), disk_between_disks_shapes()):
        sol, trace = solve_measure_cut(shapes, SCHEDULE, workers=workers)
        out.append({"solution": io.solution_dict(sol), "trace": io.trace_dict(trace)})
    return json.dumps(out, sort_keys=True)


def test_c8_determinism_and_equivariance(criterion):
    discrete_out, measure_out, problems = {}, {}, []
    for w in (1, 2, 8):
        discrete_out[w], broken = discrete_run(w)
        problems += [f"workers={w}: {b}" for b in broken]
        measure_out[w] = measure_run(w)
    same_discrete = len(set(discrete_out.values())) == 1
    same_measure = len(set(measure_out.values())) == 1
    ok = same_discrete and same_measure and not problems
    criterion("8 determinism and equivariance", ok,
              f"discrete identical={same_discrete}, measure identical={same_measure}, "
              f"{len(problems)} invariant failures")
    assert ok, problems[:5]
