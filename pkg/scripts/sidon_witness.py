"""Tabulate the product-set witness lower bound as N grows."""

import argparse

from summexp import sidon_lab as sl


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--p", default="6/5,4/3,3/2")
    parser.add_argument("--N", default="2,3,4")
    parser.add_argument("--m1", type=int, default=1)
    parser.add_argument("--k1", type=int, default=1)
    parser.add_argument("--m2", type=int, default=1)
    parser.add_argument("--k2", type=int, default=1)
    args = parser.parse_args()

    s1, s2 = sl.LambdaSpec(args.m1, args.k1), sl.LambdaSpec(args.m2, args.k2)
    print(f"{'p':>5} {'N':>3} {'margin':>7} {'inner':>6} {'L^s norm':>10} {'ratio lower':>12}")
    for p in args.p.split(","):
        for N in (int(x) for x in args.N.split(",")):
            rep = sl.witness_report(N, s1, s2, p)
            ls = "-" if rep.ls is None else f"{rep.ls.value:.6f}"
            print(f"{p:>5} {N:>3} {str(rep.margin):>7} {rep.inner:>6} {ls:>10} {rep.ratio_lower:>12.6f}")


if __name__ == "__main__":
    main()
