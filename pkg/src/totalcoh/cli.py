"""Command-line front end.

Exit codes: 0 success, 1 negative verdict (not convertible, bound not
saturated, fuzz failures), 2 usage or I/O error, 3 state fails validation.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .asymptotic import rate_sweep
from .coherence import apply_channel, is_incoherent_state, total_coherence
from .convertibility import can_convert, synthesize_channel
from .correlation import IDENTITY_TOL, coherence_to_correlation
from .fuzz import SUITES, run_suite
from .matrixlab import Rng, Spectrum, ValidationError, eigen_spectrum, random_density, trace_norm_distance, von_neumann_entropy
from .statefile import StateFileError, atomic_write, read_state, write_channel, write_state

DEFAULT_SEED = 20181011

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_INVALID = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _load(path: str):
    try:
        return read_state(path)
    except StateFileError as exc:
        raise CliError(str(exc), EXIT_USAGE) from exc
    except ValidationError as exc:
        raise CliError(f"{path}: {exc}", EXIT_INVALID) from exc


def _fmt(x: float) -> str:
    return repr(float(x))


def _resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get("COH_SEED")
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise CliError(f"COH_SEED must be an integer, got {env!r}", EXIT_USAGE) from exc
    print(f"no --seed given, using fixed seed {DEFAULT_SEED}", file=sys.stderr)
    return DEFAULT_SEED


def cmd_analyze(args) -> int:
    rho, dims = _load(args.path)
    spec = eigen_spectrum(rho)
    print(f"dim: {rho.dim}")
    if dims:
        print(f"dims: {'x'.join(map(str, dims))}")
    print(f"spectrum: [{', '.join(_fmt(p) for p in spec.probs)}]")
    print(f"entropy_bits: {_fmt(von_neumann_entropy(spec))}")
    print(f"total_coherence_bits: {_fmt(total_coherence(rho))}")
    print(f"incoherent: {str(is_incoherent_state(rho)).lower()}")
    return EXIT_OK


def cmd_convert_check(args) -> int:
    rho, _ = _load(args.rho)
    sigma, _ = _load(args.sigma)
    if rho.dim != sigma.dim:
        raise CliError(f"dimension mismatch: {rho.dim} vs {sigma.dim}", EXIT_USAGE)
    ok = can_convert(rho, sigma)
    print("CONVERTIBLE" if ok else "NOT CONVERTIBLE")
    print(f"total_coherence_rho: {_fmt(total_coherence(rho))}")
    print(f"total_coherence_sigma: {_fmt(total_coherence(sigma))}")
    if ok and args.synthesize:
        ch = synthesize_channel(rho, sigma)
        write_channel(args.synthesize, ch)
        print(f"terms: {len(ch)}")
        print(f"reconstruction_error: {_fmt(trace_norm_distance(apply_channel(ch, rho), sigma))}")
    return EXIT_OK if ok else EXIT_NEGATIVE


def _parse_spectrum(text: str) -> Spectrum:
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
        return Spectrum(vals)
    except ValueError as exc:
        raise CliError(f"bad spectrum {text!r}: {exc}", EXIT_USAGE) from exc


def _n_values(args) -> list[int]:
    if args.n_list:
        try:
            ns = [int(x) for x in args.n_list.split(",") if x.strip()]
        except ValueError as exc:
            raise CliError(f"bad --n-list: {exc}", EXIT_USAGE) from exc
    else:
        # 1-2-5 ladder up to n_max, plus n_max itself
        ns, decade = [], 1
        while decade <= args.n_max:
            ns += [k * decade for k in (1, 2, 5) if k * decade <= args.n_max]
            decade *= 10
        ns.append(args.n_max)
    if not ns or min(ns) < 1:
        raise CliError("copy counts must be positive", EXIT_USAGE)
    return ns


def cmd_rate(args) -> int:
    base = _parse_spectrum(args.spectrum)
    if not 0 < args.eps <= 0.5:
        raise CliError("--eps must lie in (0, 0.5]", EXIT_USAGE)
    table = rate_sweep(base, args.eps, _n_values(args), args.mode)
    target = math.log2(len(base)) - von_neumann_entropy(base)
    line = f"target total_coherence_bits: {_fmt(max(0.0, target))}"
    if args.out:
        atomic_write(args.out, table.to_csv())
        print(line)
    else:
        sys.stdout.write(table.to_csv())
        print(line, file=sys.stderr)
    return EXIT_OK


def cmd_correlate(args) -> int:
    rho, _ = _load(args.path)
    if args.ancilla_dim < 1:
        raise CliError("--ancilla-dim must be >= 1", EXIT_USAGE)
    rep = coherence_to_correlation(rho, args.ancilla_dim)
    print(f"total_coherence_bits: {_fmt(rep.input_coherence)}")
    print(f"mutual_information_bits: {_fmt(rep.output_mutual_information)}")
    print(f"equality_slack_bits: {_fmt(rep.equality_slack)}")
    print(f"marginal_S_distance: {_fmt(rep.marginal_distance_S)}")
    print(f"marginal_A_distance: {_fmt(rep.marginal_distance_A)}")
    if not rep.equality_checked:
        print("note: ancilla smaller than system, equality not guaranteed")
    return EXIT_OK if rep.equality_slack <= IDENTITY_TOL else EXIT_NEGATIVE


def cmd_fuzz(args) -> int:
    if args.suite not in SUITES:
        raise CliError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}", EXIT_USAGE)
    if args.trials < 1:
        raise CliError("--trials must be >= 1", EXIT_USAGE)
    report = run_suite(args.suite, args.trials, _resolve_seed(args.seed))
    print(json.dumps(report.to_dict(), sort_keys=True))
    return EXIT_OK if report.ok else EXIT_NEGATIVE


def cmd_random_state(args) -> int:
    rank = args.rank or args.dim
    if not (args.dim >= 1 and 1 <= rank <= args.dim):
        raise CliError("need dim >= 1 and 1 <= rank <= dim", EXIT_USAGE)
    rho = random_density(args.dim, rank, Rng(_resolve_seed(args.seed)))
    write_state(args.out, rho)
    print(f"wrote {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="totalcoh", description="Total quantum coherence toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="spectrum, entropy and total coherence of a state file")
    a.add_argument("path")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("convert-check", help="single-copy convertibility rho -> sigma")
    c.add_argument("rho")
    c.add_argument("sigma")
    c.add_argument("--synthesize", metavar="OUT", help="write the realizing channel as JSON")
    c.set_defaults(func=cmd_convert_check)

    r = sub.add_parser("rate", help="finite-n distillation or cost rates as CSV")
    r.add_argument("--spectrum", required=True, help="comma-separated eigenvalues")
    r.add_argument("--mode", choices=("distill", "cost"), default="distill")
    r.add_argument("--eps", type=float, default=0.01)
    g = r.add_mutually_exclusive_group(required=True)
    g.add_argument("--n-list", help="comma-separated copy counts")
    g.add_argument("--n-max", type=int, help="1-2-5 ladder of copy counts up to this value")
    r.add_argument("--out", help="CSV path (stdout if omitted)")
    r.set_defaults(func=cmd_rate)

    k = sub.add_parser("correlate", help="coherence-to-correlation conversion report")
    k.add_argument("path")
    k.add_argument("--ancilla-dim", type=int, required=True)
    k.set_defaults(func=cmd_correlate)

    f = sub.add_parser("fuzz", help="seeded invariant suites, JSON report")
    f.add_argument("--suite", required=True)
    f.add_argument("--trials", type=int, default=1000)
    f.add_argument("--seed", type=int)
    f.set_defaults(func=cmd_fuzz)

    s = sub.add_parser("random-state", help="write a seeded random density matrix")
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--rank", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_random_state)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
