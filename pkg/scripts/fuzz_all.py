"""Run every invariant suite and print one summary line each."""

import argparse
import time

from totalcoh.fuzz import SUITES, run_suite


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=10000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    for name in SUITES:
        t0 = time.perf_counter()
        rep = run_suite(name, args.trials, args.seed)
        status = "ok" if rep.ok else f"{len(rep.failures)} FAILURES"
        print(f"{name:>14}: {status:<12} worst slack {rep.worst_slack:+.3e}  ({time.perf_counter() - t0:.1f} s)")


if __name__ == "__main__":
    main()
