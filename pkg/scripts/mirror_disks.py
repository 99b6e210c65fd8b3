"""Refine toward the bisector of two mirrored disk pairs and print the trace.

    python scripts/mirror_disks.py --schedule 0.25,0.125,0.0625 --svg out.svg
"""

import time
from dataclasses import dataclass

from _common import parse_config

from mayocut import solve_measure_cut
from mayocut.fixtures import mirror_disks_shapes
from mayocut.svg import render


@dataclass
class Config:
    schedule: tuple = (0.25, 0.125, 0.0625)
    strategy: str = "sweep"
    workers: int = 1
    svg: str = ""


def main(cfg: Config):
    shapes = mirror_disks_shapes()
    t0 = time.perf_counter()
    sol, trace = solve_measure_cut(shapes, cfg.schedule, strategy=cfg.strategy,
                                   workers=cfg.workers)
    print(f"{'eps':>8} {'h':>9}  {'plane':<28} {'slab A':>8} {'slab B':>8} {'dist':>7}  ok")
    for L in trace.levels:
        print(f"{L.eps:8.4f} {L.h:9.5f}  {str(L.hyperplane):<28} "
              f"{L.slab_masses[0]:8.4f} {L.slab_masses[1]:8.4f} "
              f"{max(L.support_distances):7.4f}  {L.bisect_ok and L.touch_ok}")
    print(f"final {sol.hyperplane}  converged={trace.converged} "
          f"({time.perf_counter() - t0:.2f}s)")
    if cfg.svg:
        with open(cfg.svg, "w") as fh:
            fh.write(render(shapes=shapes, plane=sol.hyperplane))


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
