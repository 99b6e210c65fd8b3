"""Why compact support matters.

Two infinite atom rows, one at heights +-1 and one at +-2, are both bisected
by every horizontal line of height in [-1, 1], yet none of those lines meets
the second row. The solver cannot take infinite input, so this prints what
happens on truncations: with finitely many atoms the touching cut exists
again, and it is never one of the horizontal lines.

    python scripts/unbounded_counterexample.py --k-max 8
"""

from dataclasses import dataclass
from fractions import Fraction

from _common import parse_config

from mayocut import Hyperplane, Instance, bisects, solve_touching_cut, touches
from mayocut.fixtures import unbounded_rows_truncated


@dataclass
class Config:
    k_max: int = 5


def main(cfg: Config):
    a1, a2 = unbounded_rows_truncated(cfg.k_max)
    for h in (Fraction(-1), Fraction(0), Fraction(1, 2), Fraction(1)):
        H = Hyperplane((Fraction(0), Fraction(1)), h)
        print(f"y = {h}: bisects both={bisects(a1, H) and bisects(a2, H)}, "
              f"touches second row={touches(a2, H)}")
    sol = solve_touching_cut(Instance((a1, a2)))
    print(f"truncated at k={cfg.k_max}: {sol.hyperplane} through atoms {sol.witness_tuple}")


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
