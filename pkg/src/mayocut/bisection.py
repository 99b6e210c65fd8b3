"""Atomic measures, side-mass accounting and the bisect / touch predicates.

A hyperplane bisects a measure when neither *open* side carries more than
half the total mass; mass sitting on the hyperplane counts for neither side.
It touches an atomic measure when some atom lies on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DimensionMismatchError
from .geometry import (Hyperplane, Side, as_point, distance_point_hyperplane,
                       is_exact, side_of)


def total(values):
    """Exact sum for rationals, correctly rounded ``fsum`` otherwise."""
    values = list(values)
    if is_exact(values):
        return sum(values, Fraction(0))
    return math.fsum(values)


@dataclass(frozen=True)
class AtomicMeasure:
    points: tuple
    masses: tuple
    name: str = ""

    def __post_init__(self):
        pts = tuple(as_point(p) for p in self.points)
        masses = tuple(self.masses)
        if not pts:
            raise ValueError("an atomic measure needs at least one atom")
        if len(pts) != len(masses):
            raise ValueError("points and masses differ in length")
        n = len(pts[0])
        if any(len(p) != n for p in pts):
            raise DimensionMismatchError(f"measure {self.name!r} mixes dimensions")
        if any(not m > 0 for m in masses):
            raise ValueError(f"measure {self.name!r} has a nonpositive mass")
        if len(set(pts)) != len(pts):
            raise ValueError(f"measure {self.name!r} repeats an atom")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "masses", masses)

    @classmethod
    def from_atoms(cls, atoms, name=""):
        atoms = list(atoms)
        return cls(tuple(p for p, _ in atoms), tuple(m for _, m in atoms), name)

    @classmethod
    def uniform(cls, points, name="", mass=1):
        """Counting measure of a finite set (every atom gets ``mass``)."""
        points = list(points)
        return cls(tuple(points), tuple(mass for _ in points), name)

    @property
    def dim(self) -> int:
        return len(self.points[0])

    @property
    def exact(self) -> bool:
        return is_exact(self.masses) and all(is_exact(p) for p in self.points)

    @property
    def total_mass(self):
        return total(self.masses)

    @property
    def atoms(self):
        return list(zip(self.points, self.masses))

    def __len__(self):
        return len(self.points)

    def scaled(self, factor) -> "AtomicMeasure":
        return AtomicMeasure(self.points, tuple(m * factor for m in self.masses), self.name)


@dataclass
class MeasureCut:
    name: str
    total: object
    mass_minus: object
    mass_on: object
    mass_plus: object
    touch_witness: Optional[tuple]
    witness_index: Optional[int]
    support_distance: float
    bisected: bool
    touched: bool


@dataclass
class CutReport:
    hyperplane: Hyperplane
    measures: list = field(default_factory=list)
    tol: float = 0

    @property
    def all_bisected(self) -> bool:
        return all(m.bisected for m in self.measures)

    @property
    def all_touched(self) -> bool:
        return all(m.touched for m in self.measures)

    @property
    def ok(self) -> bool:
        return self.all_bisected and self.all_touched


def _classify(mu: AtomicMeasure, H: Hyperplane, tol):
    if mu.dim != H.dim:
        raise DimensionMismatchError(
            f"measure {mu.name!r} has dimension {mu.dim}, hyperplane has {H.dim}")
    return [side_of(p, H, tol) for p in mu.points]


def side_masses(mu: AtomicMeasure, H: Hyperplane, tol=0):
    """``(mass_minus, mass_on, mass_plus)`` of ``mu`` relative to ``H``."""
    sides = _classify(mu, H, tol)
    buckets = {Side.MINUS: [], Side.ON: [], Side.PLUS: []}
    for s, m in zip(sides, mu.masses):
        buckets[s].append(m)
    zero = Fraction(0) if mu.exact else 0.0
    return tuple(total(buckets[s]) if buckets[s] else zero
                 for s in (Side.MINUS, Side.ON, Side.PLUS))


def _is_bisected(minus, plus, tot) -> bool:
    return 2 * plus <= tot and 2 * minus <= tot


def bisects(mu: AtomicMeasure, H: Hyperplane, tol=0) -> bool:
    minus, _, plus = side_masses(mu, H, tol)
    return _is_bisected(minus, plus, mu.total_mass)


def touches(mu: AtomicMeasure, H: Hyperplane, tol=0) -> bool:
    return side_masses(mu, H, tol)[1] > 0


def measure_cut(mu: AtomicMeasure, H: Hyperplane, tol=0) -> MeasureCut:
    sides = _classify(mu, H, tol)
    minus, on, plus = side_masses(mu, H, tol)
    tot = mu.total_mass
    witness = next((i for i, s in enumerate(sides) if s == Side.ON), None)
    if witness is not None:
        dist = 0.0
    else:
        dist = min(distance_point_hyperplane(p, H) for p in mu.points)
    return MeasureCut(
        name=mu.name, total=tot, mass_minus=minus, mass_on=on, mass_plus=plus,
        touch_witness=mu.points[witness] if witness is not None else None,
        witness_index=witness, support_distance=dist,
        bisected=_is_bisected(minus, plus, tot), touched=on > 0)


def evaluate_cut(measures: Sequence[AtomicMeasure], H: Hyperplane, tol=0) -> CutReport:
    measures = list(measures)
    if not measures:
        raise ValueError("evaluate_cut needs at least one measure")
    dims = {mu.dim for mu in measures}
    if len(dims) != 1:
        raise DimensionMismatchError(f"measures of mixed dimension {sorted(dims)}")
    return CutReport(H, [measure_cut(mu, H, tol) for mu in measures], tol)
