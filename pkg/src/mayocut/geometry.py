"""Points, hyperplanes and the predicates built on them.

Two numeric modes share one set of types. Coordinates that are all ``int``
or ``Fraction`` are *exact*: predicates reduce to signs of exact rational
expressions and tolerances must be zero. Anything containing a float is
*approximate* and classification uses an absolute tolerance measured along
the unit normal.

A hyperplane ``(u, c)`` is the set ``{x : <u, x> = c}``; its plus side is the
open half-space ``<u, x> > c``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from numbers import Rational
from typing import Sequence

import numpy as np

from .errors import DimensionMismatchError, InvalidHyperplaneError

DEFAULT_TOL = 1e-9


def is_exact_value(v) -> bool:
    return isinstance(v, Rational)


def is_exact(values) -> bool:
    return all(isinstance(v, Rational) for v in values)


def as_point(coords, exact=None) -> tuple:
    """Normalize a coordinate sequence into a point tuple.

    With ``exact=True`` every coordinate becomes a ``Fraction`` (floats are
    converted by their binary value). With ``exact=False`` they become floats.
    ``None`` keeps ints/Fractions exact and everything else float.
    """
    coords = tuple(coords)
    if not coords:
        raise ValueError("a point needs at least one coordinate")
    if exact is None:
        exact = is_exact(coords)
    if exact:
        return tuple(Fraction(c) for c in coords)
    return tuple(float(c) for c in coords)


def dot(u, x):
    return sum(a * b for a, b in zip(u, x))


def sub(x, y):
    return tuple(a - b for a, b in zip(x, y))


class Side(enum.IntEnum):
    MINUS = -1
    ON = 0
    PLUS = 1


@dataclass(frozen=True)
class Hyperplane:
    normal: tuple
    offset: object

    def __post_init__(self):
        object.__setattr__(self, "normal", tuple(self.normal))
        if not self.normal:
            raise InvalidHyperplaneError("hyperplane normal is empty")
        if all(a == 0 for a in self.normal):
            raise InvalidHyperplaneError("hyperplane normal is the zero vector")

    @property
    def dim(self) -> int:
        return len(self.normal)

    @property
    def exact(self) -> bool:
        return is_exact(self.normal) and is_exact_value(self.offset)

    def flipped(self) -> "Hyperplane":
        return Hyperplane(tuple(-a for a in self.normal), -self.offset)

    def evaluate(self, p):
        """Signed residual ``<u, p> - c`` (not normalized)."""
        return dot(self.normal, p) - self.offset

    def unit(self) -> "Hyperplane":
        """Float copy with a unit normal and the same orientation."""
        norm = math.sqrt(sum(float(a) ** 2 for a in self.normal))
        return Hyperplane(tuple(float(a) / norm for a in self.normal),
                          float(self.offset) / norm)

    def __str__(self):
        return format_plane(self)


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def canonicalize(H: Hyperplane) -> Hyperplane:
    """Unique representative of the hyperplane ``H``.

    Exact mode: primitive integer normal with the first nonzero component
    positive, offset scaled along. Approximate mode: unit normal with
    ``offset > 0``, or ``offset == 0`` and first nonzero component positive.
    """
    normal = H.normal
    if all(a == 0 for a in normal):
        raise InvalidHyperplaneError("hyperplane normal is the zero vector")
    if H.exact:
        fr = [Fraction(a) for a in normal]
        den = reduce(_lcm, (f.denominator for f in fr), 1)
        ints = [int(f * den) for f in fr]
        g = reduce(math.gcd, (abs(i) for i in ints), 0)
        lead = next(i for i in ints if i != 0)
        sign = 1 if lead > 0 else -1
        scale = Fraction(den * sign, g)
        return Hyperplane(tuple(sign * i // g for i in ints),
                          Fraction(H.offset) * scale)
    norm = math.sqrt(sum(float(a) ** 2 for a in normal))
    u = [float(a) / norm for a in normal]
    c = float(H.offset) / norm
    lead = next(a for a in u if a != 0.0)
    if c < 0 or (c == 0 and lead < 0):
        u = [-a for a in u]
        c = -c
    # avoid a signed zero leaking into reports
    return Hyperplane(tuple(a + 0.0 for a in u), c + 0.0)


def _check_dim(p, H: Hyperplane):
    if len(p) != H.dim:
        raise DimensionMismatchError(
            f"point has dimension {len(p)}, hyperplane has {H.dim}")


def side_of(p, H: Hyperplane, tol=0) -> Side:
    """Classify ``p`` against ``H``: PLUS iff ``<u,p> - c > tol*|u|``."""
    _check_dim(p, H)
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    r = H.evaluate(p)
    if tol == 0:
        return Side((r > 0) - (r < 0))
    if H.exact and is_exact(p):
        raise ValueError("exact mode requires tol = 0")
    bound = tol * math.sqrt(sum(float(a) ** 2 for a in H.normal))
    if r > bound:
        return Side.PLUS
    if r < -bound:
        return Side.MINUS
    return Side.ON


def distance_point_hyperplane(p, H: Hyperplane) -> float:
    _check_dim(p, H)
    norm = math.sqrt(sum(float(a) ** 2 for a in H.normal))
    r = H.evaluate(p)
    if r == 0:
        return 0.0
    return abs(float(r)) / norm


@dataclass(frozen=True)
class Deficient:
    """Affine hull of the input has dimension ``dim`` < n-1."""
    dim: int


# -- exact linear algebra -------------------------------------------------

def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals; returns (rows, pivots)."""
    m = [[Fraction(v) for v in row] for row in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple[int, ...]]:
    """Integer basis of ``{v : rows @ v = 0}``, one primitive vector per free column."""
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        den = reduce(_lcm, (x.denominator for x in v), 1)
        ints = [int(x * den) for x in v]
        g = reduce(math.gcd, (abs(i) for i in ints), 0)
        basis.append(tuple(i // g for i in ints))
    return basis


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull of the points."""
    if len(points) <= 1:
        return 0
    p0 = points[0]
    diffs = [sub(p, p0) for p in points[1:]]
    if is_exact(v for p in points for v in p):
        return len(rref(diffs)[1])
    arr = np.asarray(diffs, dtype=float)
    return int(np.linalg.matrix_rank(arr, tol=1e-12 * max(1.0, np.abs(arr).max())))


def hyperplane_through(points: Sequence[Sequence]):
    """Canonical hyperplane spanned by 1..n points, or ``Deficient(d)``.

    Returns ``Deficient`` whenever the affine hull has dimension below n-1,
    which leaves a whole family of containing hyperplanes.
    """
    points = [tuple(p) for p in points]
    if not points:
        raise ValueError("need at least one point")
    n = len(points[0])
    if any(len(p) != n for p in points):
        raise DimensionMismatchError("points of mixed dimension")
    if len(points) > n:
        raise ValueError(f"at most {n} points determine a hyperplane in R^{n}")
    p0 = points[0]
    diffs = [sub(p, p0) for p in points[1:]]
    exact = is_exact(v for p in points for v in p)
    if exact:
        rank = len(rref(diffs)[1]) if diffs else 0
        if rank < n - 1:
            return Deficient(rank)
        (normal,) = nullspace(diffs, n)
        return canonicalize(Hyperplane(normal, dot(normal, p0)))
    if not diffs:
        # n == 1: the single point is the hyperplane
        return canonicalize(Hyperplane((1.0,), float(p0[0]))) if n == 1 else Deficient(0)
    arr = np.asarray(diffs, dtype=float)
    _, s, vt = np.linalg.svd(arr)
    scale = max(1.0, float(np.abs(arr).max()))
    rank = int(np.sum(s > 1e-12 * scale))
    if rank < n - 1:
        return Deficient(rank)
    normal = tuple(float(v) for v in vt[-1])
    return canonicalize(Hyperplane(normal, dot(normal, p0)))


# -- plane strings "u=a,b;c=v" --------------------------------------------

def _fmt_scalar(v) -> str:
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, int):
        return str(v)
    return repr(float(v))


def format_plane(H: Hyperplane) -> str:
    return "u=" + ",".join(_fmt_scalar(a) for a in H.normal) + ";c=" + _fmt_scalar(H.offset)
