"""Ham-sandwich cuts that bisect every input and touch each one."""

from .bisection import (AtomicMeasure, CutReport, bisects, evaluate_cut, side_masses,
                        touches)
from .discrete import Instance, Solution, enumerate_all_cuts, perturb_masses, solve_touching_cut
from .geometry import (Deficient, Hyperplane, Side, canonicalize, distance_point_hyperplane,
                       hyperplane_through, side_of)
from .measure import ConvergenceTrace, median_offset_interval, solve_measure_cut
from .oracle import gen_saltpepper, verify, verify_grids
from .shapes import Ball, Box, Disk, GridMeasure, ShapeSpec, discretize, rasterize

__version__ = "0.1.0"
