"""Warm-started ADMM rank-one battery on random vector-sum instances:
iteration counts and certification rate."""

import argparse

from cpstensor.experiments import run_rank1_admm, write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--r", type=int, default=5)
    ap.add_argument("--out", default="rank1_admm.csv")
    args = ap.parse_args()

    header, rows, summary = run_rank1_admm(
        trials=args.trials, seed=args.seed, n=args.n, r=args.r
    )
    write_csv(args.out, header, rows)
    for key, value in summary.items():
        print(f"{key}: {value}")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
