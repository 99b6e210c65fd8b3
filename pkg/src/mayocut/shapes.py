"""Shapes, cube-grid rasterization and centroid discretization.

A ``GridMeasure`` partitions an axis-aligned box into half-open cubes
``[origin + i*h, origin + (i+1)*h)``; grids built here are aligned to the
lattice ``h * Z^n`` so that refining by a power of two keeps symmetric
shapes symmetric. Components of a shape superpose: overlapping parts add
their densities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bisection import AtomicMeasure


@dataclass(frozen=True)
class Ball:
    center: tuple
    radius: float
    density: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if not self.radius > 0:
            raise ValueError("ball radius must be positive")
        if self.density < 0:
            raise ValueError("density must be nonnegative")

    @property
    def dim(self):
        return len(self.center)

    def bounds(self):
        return (tuple(c - self.radius for c in self.center),
                tuple(c + self.radius for c in self.center))

    @property
    def volume(self):
        n = self.dim
        return math.pi ** (n / 2) / math.gamma(n / 2 + 1) * self.radius**n


Disk = Ball


@dataclass(frozen=True)
class Box:
    lo: tuple
    hi: tuple
    density: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "lo", tuple(float(c) for c in self.lo))
        object.__setattr__(self, "hi", tuple(float(c) for c in self.hi))
        if len(self.lo) != len(self.hi):
            raise ValueError("box corners differ in dimension")
        if any(not a < b for a, b in zip(self.lo, self.hi)):
            raise ValueError("box must have positive extent along every axis")
        if self.density < 0:
            raise ValueError("density must be nonnegative")

    @property
    def dim(self):
        return len(self.lo)

    def bounds(self):
        return self.lo, self.hi

    @property
    def volume(self):
        return math.prod(b - a for a, b in zip(self.lo, self.hi))


@dataclass(frozen=True)
class ShapeSpec:
    components: tuple
    name: str = ""

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ValueError(f"shape {self.name!r} has no components")
        if len({c.dim for c in comps}) != 1:
            raise ValueError(f"shape {self.name!r} mixes dimensions")
        if not any(c.density > 0 for c in comps):
            raise ValueError(f"shape {self.name!r} has no positive-density component")
        bad = [c for c in comps
               if not all(math.isfinite(v) for v in c.bounds()[0] + c.bounds()[1])]
        if bad:
            raise ValueError(f"shape {self.name!r} is unbounded")
        object.__setattr__(self, "components", comps)

    @property
    def dim(self):
        return self.components[0].dim

    def bounds(self):
        los, his = zip(*(c.bounds() for c in self.components if c.density > 0))
        return tuple(map(min, zip(*los))), tuple(map(max, zip(*his)))

    @property
    def mass(self):
        """Nominal mass, exact when components do not overlap."""
        return math.fsum(c.density * c.volume for c in self.components)


@dataclass
class GridMeasure:
    origin: tuple
    h: float
    dims: tuple
    cell_masses: np.ndarray
    name: str = ""
    supersample: int = field(default=1, repr=False)

    def __post_init__(self):
        self.origin = tuple(float(v) for v in self.origin)
        self.dims = tuple(int(d) for d in self.dims)
        self.cell_masses = np.asarray(self.cell_masses, dtype=float).reshape(self.dims)
        if not self.h > 0:
            raise ValueError("cell size must be positive")
        if (self.cell_masses < 0).any():
            raise ValueError("cell masses must be nonnegative")

    @property
    def dim(self):
        return len(self.dims)

    @property
    def total_mass(self):
        return math.fsum(self.cell_masses[self.cell_masses > 0].ravel())

    @property
    def cell_diameter(self):
        return self.h * math.sqrt(self.dim)

    def loaded_cells(self):
        """Indices (k x n) and masses of the cells with positive mass, C order."""
        idx = np.argwhere(self.cell_masses > 0)
        return idx, self.cell_masses[tuple(idx.T)]

    def centers(self, idx):
        return np.asarray(self.origin) + (np.asarray(idx) + 0.5) * self.h


def _axis_samples(origin, h, count, s):
    """Midpoints of the s sub-intervals of each of ``count`` cells."""
    # (2*(i*s + j) + 1) * h / (2*s): exact for dyadic h and s
    k = np.arange(count * s)
    return origin + (2 * k + 1) * (h / (2 * s))


def _fine_masses(comp, origin, h, dims, s):
    """Mass of each sub-cell of side h/s (shape dims*s); exact for boxes."""
    fine_dims = tuple(d * s for d in dims)
    hf = h / s
    if isinstance(comp, Box):
        parts = []
        for k, (a, b) in enumerate(zip(comp.lo, comp.hi)):
            edges = origin[k] + np.arange(fine_dims[k] + 1) * hf
            parts.append(np.clip(np.minimum(edges[1:], b) - np.maximum(edges[:-1], a),
                                 0.0, None))
        out = comp.density
        for k, part in enumerate(parts):
            shape = [1] * len(parts)
            shape[k] = -1
            out = out * part.reshape(shape)
        return np.broadcast_to(out, fine_dims).astype(float)
    grids = np.meshgrid(*[_axis_samples(origin[k], h, dims[k], s) - comp.center[k]
                          for k in range(len(dims))], indexing="ij", sparse=True)
    r2 = sum(g * g for g in grids)
    return np.where(r2 <= comp.radius**2, comp.density * hf ** len(dims), 0.0)


def _block_sum(fine, s):
    n = fine.ndim
    shape = []
    for d in fine.shape:
        shape.extend([d // s, s])
    return fine.reshape(shape).sum(axis=tuple(range(1, 2 * n, 2)))


def grid_frame(shape: ShapeSpec, h):
    """Lattice-aligned origin and cell counts covering the shape's bounding box."""
    lo, hi = shape.bounds()
    origin = tuple(math.floor(a / h) * h for a in lo)
    dims = tuple(max(1, math.ceil((b - o) / h)) for o, b in zip(origin, hi))
    return origin, dims


def fine_masses(shape: ShapeSpec, h, s=4, frame=None):
    origin, dims = frame or grid_frame(shape, h)
    fine = np.zeros(tuple(d * s for d in dims))
    for comp in shape.components:
        if comp.density > 0:
            fine += _fine_masses(comp, origin, h, dims, s)
    return origin, dims, fine


def rasterize(shape: ShapeSpec, h, s=4) -> GridMeasure:
    """Cell masses of ``shape`` on the cube grid of side ``h``.

    Boxes are integrated exactly; balls by the midpoint rule on an
    ``s x ... x s`` sub-grid per cell.
    """
    if not h > 0:
        raise ValueError("cell size must be positive")
    if s < 1:
        raise ValueError("supersampling factor must be at least 1")
    origin, dims, fine = fine_masses(shape, h, s)
    masses = _block_sum(fine, s)
    if not (masses > 0).any():
        raise ValueError(f"shape {shape.name!r} rasterizes to an empty grid at h={h}")
    return GridMeasure(origin, h, dims, masses, shape.name, supersample=s)


def discretize(grid: GridMeasure) -> AtomicMeasure:
    """One atom per loaded cell, at the cell centroid, carrying the cell's mass."""
    idx, masses = grid.loaded_cells()
    if len(masses) == 0:
        raise ValueError(f"grid {grid.name!r} carries no mass")
    centers = grid.centers(idx)
    return AtomicMeasure(tuple(tuple(float(v) for v in c) for c in centers),
                         tuple(float(m) for m in masses), grid.name)
