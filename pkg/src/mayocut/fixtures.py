"""Worked configurations used by tests, scripts and the bundled data files."""

from fractions import Fraction

from .bisection import AtomicMeasure
from .discrete import Instance
from .shapes import Ball, ShapeSpec


def mirror_disks_shapes():
    """Two disk pairs mirrored across the y-axis; the only common bisector is y = 0."""
    a = ShapeSpec((Ball((-1.0, 1.0), 1.0), Ball((-1.0, -1.0), 1.0)), "A")
    b = ShapeSpec((Ball((1.0, 1.0), 1.0), Ball((1.0, -1.0), 1.0)), "B")
    return [a, b]


def disk_between_disks_shapes():
    """Unit disk at the origin against two unit disks at (+-3, 0)."""
    a = ShapeSpec((Ball((0.0, 0.0), 1.0),), "A")
    b = ShapeSpec((Ball((-3.0, 0.0), 1.0), Ball((3.0, 0.0), 1.0)), "B")
    return [a, b]


def disk_centers_instance():
    """Disk centers of the previous configuration as unit atoms."""
    a = AtomicMeasure.uniform([(Fraction(0), Fraction(0))], "A")
    b = AtomicMeasure.uniform([(Fraction(-3), Fraction(0)), (Fraction(3), Fraction(0))], "B")
    return Instance((a, b))


def unbounded_rows_truncated(k_max=5):
    """Truncation of the non-compact counterexample (unit masses, k = 1..k_max).

    Horizontal lines of height in [-1, 1] bisect both, yet none meets the
    second measure; with compact support restored the solver still succeeds.
    """
    a = AtomicMeasure.uniform(
        [(Fraction(k), Fraction(s)) for k in range(1, k_max + 1) for s in (1, -1)], "A1")
    b = AtomicMeasure.uniform(
        [(Fraction(-k), Fraction(s)) for k in range(1, k_max + 1) for s in (2, -2)], "A2")
    return a, b
