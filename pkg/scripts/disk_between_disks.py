"""A disk between two disks: x = 0 bisects but misses the outer pair.

Checks both candidate lines on the rasterized shapes, then runs the solver.

    python scripts/disk_between_disks.py --h 0.0625
"""

from dataclasses import dataclass

from _common import parse_config

from mayocut import Hyperplane, rasterize, solve_measure_cut
from mayocut.fixtures import disk_between_disks_shapes
from mayocut.oracle import verify_grids


@dataclass
class Config:
    h: float = 0.0625
    schedule: tuple = (0.25, 0.125, 0.0625)
    workers: int = 1


def main(cfg: Config):
    shapes = disk_between_disks_shapes()
    grids = [rasterize(s, cfg.h) for s in shapes]
    for name, plane in (("x = 0", Hyperplane((1.0, 0.0), 0.0)),
                        ("y = 0", Hyperplane((0.0, 1.0), 0.0))):
        rep = verify_grids(grids, plane)
        dists = ", ".join(f"{m.name}:{m.nearest_distance:.3f}" for m in rep.measures)
        print(f"{name}: bisected={rep.bisected} touched={rep.touched} (distances {dists})")
    sol, trace = solve_measure_cut(shapes, cfg.schedule, workers=cfg.workers)
    last = trace.levels[-1]
    print(f"solver: {sol.hyperplane}  bisect_ok={last.bisect_ok} touch_ok={last.touch_ok}")


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
