"""Log-log growth of the diagonal bilinear witness over a grid of (s, q)."""

import argparse

from summexp import exponents as ex
from summexp import tensor_lab as tl
from summexp.extrational import ExtRational


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--s", default="3/2,2,3")
    parser.add_argument("--q", default="4/3,2")
    parser.add_argument("--max-log2n", type=int, default=10)
    args = parser.parse_args()

    grid = [2**k for k in range(4, args.max_log2n + 1)]
    print(f"{'s':>5} {'q':>5} {'lhs slope':>10} {'rhs slope':>10}  summing (r=2, p=4/3)")
    for s_text in args.s.split(","):
        for q_text in args.q.split(","):
            s, q = ExtRational(s_text), ExtRational(q_text)
            fit = tl.diagonal_growth(float(s), float(q), grid)
            flag = ex.opti2_predicate(2, "4/3", s, q) if s >= 2 and q >= ExtRational("4/3") else "-"
            print(f"{s_text:>5} {q_text:>5} {fit.lhs_slope:>10.4f} {fit.rhs_slope:>10.4f}  {flag}")


if __name__ == "__main__":
    main()
