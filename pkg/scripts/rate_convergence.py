"""Finite-n distillation and cost rates approaching the total coherence.

    python scripts/rate_convergence.py --spectrum 0.9,0.1 --eps 0.01 --n-max 20000
"""

import argparse
import math

from totalcoh.asymptotic import rate_sweep
from totalcoh.matrixlab import Spectrum, von_neumann_entropy


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--spectrum", default="0.9,0.1")
    ap.add_argument("--eps", type=float, default=0.01)
    ap.add_argument("--n-max", type=int, default=20000)
    args = ap.parse_args()

    base = Spectrum([float(x) for x in args.spectrum.split(",")])
    target = math.log2(len(base)) - von_neumann_entropy(base)
    ns = [n for n in (10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000, 20000, 50000) if n <= args.n_max]
    distill = rate_sweep(base, args.eps, ns, "distill").rows
    cost = rate_sweep(base, args.eps, ns, "cost").rows

    print(f"target C_R = {target:.6f} bits, eps = {args.eps}")
    print(f"{'n':>7} {'distill':>9} {'cost':>9} {'gap*sqrt(n)':>12}")
    for d, c in zip(distill, cost):
        # both gaps shrink like 1/sqrt(n); the scaled column should level off
        scaled = max(abs(d.rate - target), abs(c.rate - target)) * math.sqrt(d.n)
        print(f"{d.n:>7} {d.rate:>9.5f} {c.rate:>9.5f} {scaled:>12.4f}")


if __name__ == "__main__":
    main()
