"""Scatter salt and pepper, find a line through one grain of each, count sides.

    python scripts/saltpepper.py --trials 200 --salt 9 --pepper 12
"""

import time
from dataclasses import dataclass

from _common import parse_config

from mayocut import solve_touching_cut
from mayocut.oracle import gen_saltpepper, verify


@dataclass
class Config:
    trials: int = 100
    salt: int = 8
    pepper: int = 11
    seed: int = 0
    workers: int = 1
    show: int = 3


def main(cfg: Config):
    t0 = time.perf_counter()
    stages = {}
    for k in range(cfg.trials):
        inst = gen_saltpepper(cfg.seed + k, cfg.salt, cfg.pepper, (0, 0, 10, 10))
        sol = solve_touching_cut(inst, workers=cfg.workers)
        assert verify(inst, sol.hyperplane).verdict
        stages[sol.diagnostics.stage] = stages.get(sol.diagnostics.stage, 0) + 1
        if k < cfg.show:
            sides = ", ".join(f"{m.name} {m.mass_minus}|{m.mass_on}|{m.mass_plus}"
                              for m in sol.report.measures)
            print(f"seed {cfg.seed + k}: {sol.hyperplane}  grains {sol.witness_tuple}  ({sides})")
    print(f"{cfg.trials} tables solved in {time.perf_counter() - t0:.2f}s, stages {stages}")


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
