"""Exact rigid motions and small brute-force helpers shared by the tests."""

from fractions import Fraction

from mayocut import AtomicMeasure, Hyperplane, Instance, canonicalize
from mayocut.geometry import rref


def rotation_2d(t):
    """Rational rotation from the tangent half-angle ``t``."""
    t = Fraction(t)
    d = 1 + t * t
    c, s = (1 - t * t) / d, 2 * t / d
    return ((c, -s), (s, c))


def rotation_3d(a, b, c):
    """Cayley transform (I - K)(I + K)^-1 of a rational skew matrix."""
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    K = [[0, -c, b], [c, 0, -a], [-b, a, 0]]
    eye = [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]
    plus = [[eye[i][j] + K[i][j] for j in range(3)] for i in range(3)]
    minus = [[eye[i][j] - K[i][j] for j in range(3)] for i in range(3)]
    red, _ = rref([plus[i] + eye[i] for i in range(3)])
    inv = [row[3:] for row in red]
    return tuple(tuple(sum(minus[i][k] * inv[k][j] for k in range(3)) for j in range(3))
                 for i in range(3))


def apply(R, t, p):
    return tuple(sum(R[i][k] * p[k] for k in range(len(p))) + t[i] for i in range(len(p)))


def move_instance(inst, R, t):
    return Instance(tuple(
        AtomicMeasure(tuple(apply(R, t, p) for p in mu.points), mu.masses, mu.name)
        for mu in inst.measures))


def move_plane(H, R, t):
    """Image of {<u,x> = c} under x -> R x + t, for orthogonal R."""
    u = tuple(sum(R[i][k] * H.normal[k] for k in range(len(H.normal)))
              for i in range(len(H.normal)))
    c = H.offset + sum(a * b for a, b in zip(u, t))
    return canonicalize(Hyperplane(u, c))


def line_cuts_brute_force(A, B):
    """Lines through a in A and b in B with at most half of each set strictly per side.

    Written out by hand with cross products, independent of the library.
    Returns (i, j, (u1, u2, c)) in lexicographic order, integer-primitive form.
    """
    from math import gcd

    out = []
    for i, a in enumerate(A):
        for j, b in enumerate(B):
            if a == b:
                continue
            u1, u2 = a[1] - b[1], b[0] - a[0]
            c = u1 * a[0] + u2 * a[1]
            ok = True
            for S in (A, B):
                plus = sum(1 for p in S if u1 * p[0] + u2 * p[1] > c)
                minus = sum(1 for p in S if u1 * p[0] + u2 * p[1] < c)
                ok &= 2 * plus <= len(S) and 2 * minus <= len(S)
            if ok:
                fr = [Fraction(v) for v in (u1, u2, c)]
                den = 1
                for f in fr:
                    den = den * f.denominator // gcd(den, f.denominator)
                ints = [int(f * den) for f in fr]
                g = gcd(gcd(abs(ints[0]), abs(ints[1])), abs(ints[2]))
                sign = 1 if (ints[0] > 0 or (ints[0] == 0 and ints[1] > 0)) else -1
                out.append((i, j, tuple(sign * v // g for v in ints)))
    return out


def median_interval_brute_force(points, masses, u):
    """Scan every breakpoint and gap midpoint; return (lo, hi) of the bisecting offsets.

    Bisection is judged directly: neither open side may hold more than half.
    Also asserts the bisecting offsets form one closed interval.
    """
    proj = sorted({sum(a * b for a, b in zip(u, p)) for p in points})
    tot = sum(masses)
    probes = [proj[0] - 1] + [x for pair in zip(proj, proj[1:])
                              for x in (pair[0], (pair[0] + pair[1]) / 2)] + [proj[-1], proj[-1] + 1]

    def ok(c):
        plus = sum(m for p, m in zip(points, masses) if sum(a * b for a, b in zip(u, p)) > c)
        minus = sum(m for p, m in zip(points, masses) if sum(a * b for a, b in zip(u, p)) < c)
        return 2 * plus <= tot and 2 * minus <= tot

    flags = [ok(c) for c in probes]
    good = [c for c, f in zip(probes, flags) if f]
    first, last = flags.index(True), len(flags) - 1 - flags[::-1].index(True)
    assert all(flags[first:last + 1]), "bisecting offsets are not an interval"
    return min(good), max(good)
