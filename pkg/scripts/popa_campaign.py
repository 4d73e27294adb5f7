"""Run a random mixed-norm campaign and optionally save the per-trial CSV."""

import argparse
import json
import time

from summexp import tensor_lab as tl


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--q", type=float, default=2.0)
    parser.add_argument("--r", default="1,1,1")
    parser.add_argument("--max-dims", default="6,6,6")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--csv")
    args = parser.parse_args()

    r = [float(x) for x in args.r.split(",")]
    max_dims = [int(x) for x in args.max_dims.split(",")]
    start = time.perf_counter()
    camp = tl.popa_campaign(args.trials, args.seed, args.q, r, max_dims=max_dims, workers=args.workers)
    summary = camp.summary() | {"seconds": round(time.perf_counter() - start, 3)}
    print(json.dumps(summary, indent=2))
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(camp.to_csv())


if __name__ == "__main__":
    main()
