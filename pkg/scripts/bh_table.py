"""Print the dispatcher's exponent for singleton blocks with q=2, r=p=1."""

import argparse
from fractions import Fraction

from summexp import exponents as ex
from summexp.extrational import fmt


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-m", type=int, default=10)
    args = parser.parse_args()
    print(f"{'m':>3}  {'s':>7}  {'2m/(m+1)':>9}  theorem")
    for m in range(2, args.max_m + 1):
        res = ex.best_exponent(ex.PartitionScenario.singletons(2, [1] * m, [1] * m))
        print(f"{m:>3}  {fmt(res.s):>7}  {fmt(Fraction(2 * m, m + 1)):>9}  {res.theorem.value}")


if __name__ == "__main__":
    main()
