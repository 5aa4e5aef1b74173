"""Coherence-to-correlation conversion over ancilla sizes for a few random states."""

import argparse

from totalcoh.correlation import coherence_to_correlation
from totalcoh.matrixlab import Rng, random_density


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--states", type=int, default=4)
    args = ap.parse_args()

    master = Rng(args.seed)
    print(f"{'n':>3} {'m':>3} {'C_R':>10} {'I':>10} {'slack':>11} {'|S-I/n|':>10} {'|A-I/m|':>10}")
    for k in range(args.states):
        rng = master.split(k)
        n = rng.integer(2, 4)
        rho = random_density(n, rng.integer(1, n), rng)
        for m in range(1, n + 2):
            r = coherence_to_correlation(rho, m)
            print(
                f"{n:>3} {m:>3} {r.input_coherence:>10.6f} {r.output_mutual_information:>10.6f} "
                f"{r.equality_slack:>11.2e} {r.marginal_distance_S:>10.2e} {r.marginal_distance_A:>10.2e}"
            )
        print()


if __name__ == "__main__":
    main()
