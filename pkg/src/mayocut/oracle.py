"""Independent re-checking of cuts and seeded instance generation.

``verify`` recomputes everything from ``side_of`` alone and shares no state
with the solvers, so a solver bug that does not also live in ``side_of``
shows up as a failed verdict.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .bisection import AtomicMeasure
from .errors import DimensionMismatchError
from .geometry import Hyperplane, Side, distance_point_hyperplane, side_of

COORD_DENOMINATOR = 2**16
MAX_DRAWS_PER_POINT = 100


@dataclass
class MeasureVerdict:
    name: str
    total: object
    mass_minus: object
    mass_on: object
    mass_plus: object
    bisected: bool
    touched: bool
    witness: Optional[tuple] = None
    nearest_distance: float = 0.0


@dataclass
class VerifyReport:
    hyperplane: Hyperplane
    measures: list = field(default_factory=list)

    @property
    def bisected(self) -> bool:
        return all(m.bisected for m in self.measures)

    @property
    def touched(self) -> bool:
        return all(m.touched for m in self.measures)

    @property
    def verdict(self) -> bool:
        return all(m.bisected and m.touched for m in self.measures)


def _sum(values, exact):
    return sum(values, Fraction(0)) if exact else math.fsum(values)


def _verdict(name, points, masses, H, tol, exact):
    minus, on, plus = [], [], []
    witness = None
    for p, m in zip(points, masses):
        s = side_of(p, H, tol)
        if s is Side.PLUS:
            plus.append(m)
        elif s is Side.MINUS:
            minus.append(m)
        else:
            on.append(m)
            if witness is None:
                witness = p
    tot = _sum(masses, exact)
    mp, mo, mm = _sum(plus, exact), _sum(on, exact), _sum(minus, exact)
    nearest = 0.0 if witness is not None else min(
        distance_point_hyperplane(p, H) for p in points)
    return MeasureVerdict(name, tot, mm, mo, mp,
                          bisected=2 * mp <= tot and 2 * mm <= tot,
                          touched=mo > 0, witness=witness, nearest_distance=nearest)


def verify(inst, H: Hyperplane, tol=0) -> VerifyReport:
    """Direct recomputation of "bisects every measure and meets each one"."""
    measures = inst.measures if hasattr(inst, "measures") else list(inst)
    report = VerifyReport(H)
    for mu in measures:
        if mu.dim != H.dim:
            raise DimensionMismatchError(
                f"measure {mu.name!r} has dimension {mu.dim}, plane has {H.dim}")
        report.measures.append(
            _verdict(mu.name, mu.points, mu.masses, H, tol, mu.exact))
    return report


def verify_grids(grids, H: Hyperplane, tol=1e-9, touch_tol=None) -> VerifyReport:
    """Verify a cut against rasterized measures.

    Bisection is judged on the centroid atoms; touching on the distance from
    ``H`` to the nearest cube of positive mass, accepted when it is at most
    ``touch_tol`` (default zero, i.e. the plane meets a loaded cell).
    """
    report = VerifyReport(H)
    Hu = H.unit()
    u = np.asarray(Hu.normal, dtype=float)
    for g in grids:
        if len(g.origin) != H.dim:
            raise DimensionMismatchError("grid and plane dimensions differ")
        idx = np.argwhere(g.cell_masses > 0)
        centers = np.asarray(g.origin) + (idx + 0.5) * g.h
        masses = [float(m) for m in g.cell_masses[tuple(idx.T)]]
        points = [tuple(float(v) for v in c) for c in centers]
        v = _verdict(g.name, points, masses, Hu, tol, exact=False)
        half_extent = 0.5 * g.h * float(np.abs(u).sum())
        gap = np.abs(centers @ u - Hu.offset) - half_extent
        dist = float(max(0.0, gap.min()))
        v.nearest_distance = dist
        v.touched = dist <= (touch_tol or 0.0) + tol
        report.measures.append(v)
    return report


# -- generators ------------------------------------------------------------

def _draw_points(rng, count, lo, hi, taken):
    out = []
    for _ in range(count):
        for _ in range(MAX_DRAWS_PER_POINT):
            p = tuple(Fraction(rng.randint(math.ceil(a * COORD_DENOMINATOR),
                                           math.floor(b * COORD_DENOMINATOR)),
                               COORD_DENOMINATOR)
                      for a, b in zip(lo, hi))
            if p not in taken:
                taken.add(p)
                out.append(p)
                break
        else:
            raise ValueError("bounding box too small to draw distinct points")
    return out


def gen_instance(seed, sizes, lo, hi, names=None):
    """Unit-mass instance in R^len(sizes) with points uniform in the box [lo, hi]."""
    from .discrete import Instance

    if any(s < 1 for s in sizes):
        raise ValueError("every set needs at least one point")
    if len(lo) != len(sizes) or len(hi) != len(sizes):
        raise DimensionMismatchError("box dimension must equal the number of sets")
    if any(not a < b for a, b in zip(lo, hi)):
        raise ValueError("degenerate bounding box")
    rng = random.Random(seed)
    taken = set()
    names = names or [chr(ord("A") + i) for i in range(len(sizes))]
    return Instance(tuple(
        AtomicMeasure.uniform(_draw_points(rng, s, lo, hi, taken), name)
        for s, name in zip(sizes, names)))


def gen_saltpepper(seed, count_salt, count_pepper, bbox=(0, 0, 1, 1)):
    """Salt and pepper grains scattered on a table ``bbox = (x0, y0, x1, y1)``."""
    if count_salt < 1 or count_pepper < 1:
        raise ValueError("need at least one grain of salt and one of pepper")
    x0, y0, x1, y1 = bbox
    return gen_instance(seed, (count_salt, count_pepper), (x0, y0), (x1, y1),
                        names=("salt", "pepper"))


def random_instances(seed, count, dim, max_size, lo=0, hi=10):
    """``count`` seeded instances with set sizes drawn from 1..max_size."""
    rng = random.Random(seed)
    for _ in range(count):
        sizes = tuple(rng.randint(1, max_size) for _ in range(dim))
        yield gen_instance(rng.getrandbits(32), sizes, (lo,) * dim, (hi,) * dim)


def brute_force_cuts(inst):
    """All hyperplanes through one atom per set that bisect and touch.

    Plain Fraction arithmetic over every spanning tuple of atoms, for
    cross-checking the solver on small general-position instances.
    """
    from .geometry import Deficient, hyperplane_through

    found = []
    for tup in itertools.product(*[mu.points for mu in inst.measures]):
        H = hyperplane_through(list(tup))
        if isinstance(H, Deficient):
            continue
        if verify(inst, H).verdict and H not in found:
            found.append(H)
    return found
