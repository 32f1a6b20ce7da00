"""
PatternRSA - command-line entry point
RSA moduli with prescribed bit patterns, exact counting oracle and
character-sum measurements.

Exit codes: 0 success, 1 algorithmic failure (rounds exhausted, pattern
mismatch), 2 usage error.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

from bitnum import BitString
from charsum import (
    SCAN_HEADER,
    CharacterIndex,
    all_short_sums,
    decay_scan,
    max_nonprincipal_sum,
    short_sum_direct,
    summarize_short_sums,
)
from errors import ParameterError, PatternRSAError, RoundsExhaustedError, SamplingExhaustedError
from generator import (
    corollary_m,
    in_proven_regime,
    round_stats,
    rsa_modulus,
    sparse_modulus,
    sparse_stats,
    theorem_m,
    verify,
)
from oracle import CountingMode, count_nk, count_report, delta_triangle_bound, delta_via_characters
from primes import enumerate_primes, make_rng, random_bits
from settings import configure
from utils import dump_json, format_human, parse_int, render_int, rows_to_csv

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class UsageArgumentParser(argparse.ArgumentParser):
    """argparse parser whose usage errors raise instead of exiting"""

    def error(self, message):
        raise ParameterError(message)


def _emit(record: Dict, args) -> None:
    if args.format == "human":
        print("\n".join(format_human(record)))
    else:
        print(dump_json(record))


def _advise(n: int, m: int) -> None:
    bound = theorem_m(n)
    if bound is None:
        print(f"⚠️  n={n}: floor(n - n^(3/4) ln n) <= 0, m={m} is outside the proven regime "
              "(algorithm still well defined)", file=sys.stderr)
    elif in_proven_regime(n, m):
        print(f"✅ n={n}: m={m} <= {bound}, inside the proven regime", file=sys.stderr)
    else:
        print(f"⚠️  n={n}: m={m} > {bound}, outside the proven regime", file=sys.stderr)


def _pattern(args, m: int, required: bool = True) -> Optional[BitString]:
    if args.sigma is None:
        if required:
            raise ParameterError("--sigma is required")
        return None
    sigma = BitString.parse(args.sigma)
    if len(sigma) != m:
        raise ParameterError(f"--sigma has length {len(sigma)} but --m is {m}")
    return sigma


# ============================================================================
# Subcommands
# ============================================================================

def cmd_gen(args) -> int:
    sigma = _pattern(args, args.m)
    _advise(args.n, args.m)
    record = rsa_modulus(args.n, args.m, sigma, seed=args.seed, max_rounds=args.max_rounds)
    _emit(record.to_record(args.hex), args)
    return EXIT_OK


def cmd_sparse(args) -> int:
    if args.runs < 1:
        raise ParameterError(f"--runs must be positive, got {args.runs}")
    _advise(args.n, args.m)
    bound = corollary_m(args.n)
    if bound is not None:
        print(f"ℹ️  sparse-variant length ceil(n - n^(3/4) ln n) = {bound}", file=sys.stderr)
    if args.runs > 1:
        report = sparse_stats(args.n, args.m, args.runs, seed=args.seed, max_rounds=args.max_rounds)
        _emit(report.to_record(args.hex), args)
        return EXIT_OK if report.successes == report.runs else EXIT_FAILURE
    record = sparse_modulus(args.n, args.m, seed=args.seed, max_rounds=args.max_rounds)
    _emit(record.to_record(args.hex), args)
    return EXIT_OK


def cmd_verify(args) -> int:
    sigma = _pattern(args, args.m)
    modulus = parse_int(args.modulus)
    matched = verify(modulus, args.n, args.m, sigma)
    if args.format == "human":
        print("true" if matched else "false")
    else:
        print(dump_json({
            "M": render_int(modulus, args.hex),
            "n": args.n,
            "m": args.m,
            "sigma": str(sigma),
            "verified": matched,
        }))
    return EXIT_OK if matched else EXIT_FAILURE


def cmd_oracle(args) -> int:
    sigma = _pattern(args, args.m, required=args.m > 0) or BitString.zeros(0)
    mode = CountingMode(args.mode)
    if args.k is not None:
        _emit({
            "n": args.n, "m": args.m, "sigma": str(sigma), "mode": mode.value,
            "k": args.k, "count": count_nk(args.n, args.m, sigma, args.k, mode),
        }, args)
        return EXIT_OK

    report = count_report(args.n, args.m, sigma, mode, include_counts=False if args.summary else None)
    record = report.to_record(args.hex)
    if args.characters:
        value = delta_via_characters(args.n, args.m, sigma)
        record["delta_via_characters"] = [value.real, value.imag]
        record["triangle_bound"] = delta_triangle_bound(args.n, args.m, sigma)
    _emit(record, args)
    return EXIT_OK


def cmd_charsum(args) -> int:
    if args.scan is not None:
        low, high = args.scan
        rows = decay_scan(range(low, high + 1), length_shift=args.length_shift, t0=args.t0)
        sys.stdout.write(rows_to_csv(SCAN_HEADER, (row.as_row() for row in rows)))
        return EXIT_OK

    if args.n is None or args.L is None:
        raise ParameterError("--n and --L are required unless --scan is given")
    t0 = 0 if args.t0 is None else args.t0

    if args.alpha is not None or args.beta is not None:
        chi = CharacterIndex(args.alpha or 0, args.beta or 0)
        table_value = all_short_sums(t0, args.L, args.n)[chi]
        direct_value = short_sum_direct(chi, t0, args.L, args.n)
        _emit({
            "n": args.n, "t0": t0, "L": args.L, "alpha": chi.alpha, "beta": chi.beta,
            "table_value": [table_value.real, table_value.imag],
            "direct_value": [direct_value.real, direct_value.imag],
        }, args)
        return EXIT_OK

    if args.max:
        magnitude, chi = max_nonprincipal_sum(t0, args.L, args.n)
        _emit({
            "n": args.n, "t0": t0, "L": args.L,
            "max_magnitude": magnitude, "argmax_alpha": chi.alpha, "argmax_beta": chi.beta,
            "ratio": magnitude / args.L if args.L else None,
        }, args)
        return EXIT_OK

    _emit(summarize_short_sums(t0, args.L, args.n).to_record(), args)
    return EXIT_OK


def cmd_stats(args) -> int:
    if args.sigma is None:
        sigma = BitString.parse(format(random_bits(make_rng(args.seed), args.m), f"0{args.m}b")) \
            if args.m > 0 else BitString.zeros(0)
    else:
        sigma = _pattern(args, args.m)
    _advise(args.n, args.m)
    stats = round_stats(args.n, args.m, sigma, args.trials, seed=args.seed, max_rounds=args.max_rounds)
    _emit(stats.to_record(args.hex), args)
    return EXIT_OK if stats.failures == 0 else EXIT_FAILURE


def cmd_primes(args) -> int:
    prime_set = enumerate_primes(args.n)
    if args.format == "human":
        print(f"#P_{args.n} = {len(prime_set)}", file=sys.stderr)
    sys.stdout.write(prime_set.export_text())
    return EXIT_OK


# ============================================================================
# Parser
# ============================================================================

def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=None, help="YAML file with setting overrides")
    common.add_argument("--sieve-ceiling", type=int, default=None, dest="sieve_ceiling",
                        help="Largest n for prime enumeration (default 26)")
    common.add_argument("--charsum-ceiling", type=int, default=None, dest="charsum_ceiling",
                        help="Largest n for character tables (default 22)")
    common.add_argument("--format", choices=("json", "human"), default="json", help="Output format")
    common.add_argument("--hex", action="store_true", help="Render big integers in 0x-prefixed hexadecimal")
    common.add_argument("--verbose", "-v", action="store_true", help="Debug logging on stderr")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = UsageArgumentParser(
        prog="patternrsa",
        description="RSA moduli with prescribed bit patterns and their counting analysis",
    )
    sub = parser.add_subparsers(dest="command", parser_class=UsageArgumentParser)
    sub.required = True

    gen = sub.add_parser("gen", parents=[common], help="Generate a modulus with a prescribed pattern")
    gen.add_argument("--n", type=int, required=True, help="Bit length of each prime")
    gen.add_argument("--m", type=int, required=True, help="Pattern length (1 <= m <= n-1)")
    gen.add_argument("--sigma", type=str, required=True, help="Pattern for bits n-1..n-m, MSB first")
    gen.add_argument("--seed", type=int, default=0, help="64-bit seed")
    gen.add_argument("--max-rounds", type=int, default=None, dest="max_rounds", help="Round cap (default 64*n)")
    gen.set_defaults(handler=cmd_gen)

    sparse = sub.add_parser("sparse", parents=[common], help="Generate a modulus with m forced zero bits")
    sparse.add_argument("--n", type=int, required=True)
    sparse.add_argument("--m", type=int, required=True)
    sparse.add_argument("--seed", type=int, default=0)
    sparse.add_argument("--max-rounds", type=int, default=None, dest="max_rounds")
    sparse.add_argument("--runs", type=int, default=1, help="Runs > 1 report the popcount distribution")
    sparse.set_defaults(handler=cmd_sparse)

    check = sub.add_parser("verify", parents=[common], help="Check the bits n-1..n-m of a modulus")
    check.add_argument("--modulus", type=str, required=True, help="Decimal or 0x-hex integer")
    check.add_argument("--n", type=int, required=True)
    check.add_argument("--m", type=int, required=True)
    check.add_argument("--sigma", type=str, required=True)
    check.set_defaults(handler=cmd_verify)

    oracle = sub.add_parser("oracle", parents=[common], help="Exact N(k) counts and Delta")
    oracle.add_argument("--n", type=int, required=True)
    oracle.add_argument("--m", type=int, required=True)
    oracle.add_argument("--sigma", type=str, default=None)
    oracle.add_argument("--mode", choices=[mode.value for mode in CountingMode], default="ordered")
    oracle.add_argument("--k", type=int, default=None, help="Report a single N(k)")
    oracle.add_argument("--characters", action="store_true", help="Also rebuild Delta from characters")
    oracle.add_argument("--summary", action="store_true", help="Omit the N(k) table")
    oracle.set_defaults(handler=cmd_oracle)

    charsum = sub.add_parser("charsum", parents=[common], help="Short character sums modulo 2^n")
    charsum.add_argument("--n", type=int, default=None)
    charsum.add_argument("--L", type=int, default=None, help="Interval length")
    charsum.add_argument("--t0", type=int, default=None, help="Interval start (default 0; scans default 1)")
    charsum.add_argument("--max", action="store_true", help="Largest nonprincipal sum only")
    charsum.add_argument("--alpha", type=int, default=None)
    charsum.add_argument("--beta", type=int, default=None)
    charsum.add_argument("--scan", type=int, nargs=2, metavar=("LO", "HI"), default=None,
                         help="CSV of max|sum|/L for n in LO..HI")
    charsum.add_argument("--length-shift", type=int, default=2, dest="length_shift",
                         help="Scan length L = 2^(n - shift)")
    charsum.set_defaults(handler=cmd_charsum)

    stats = sub.add_parser("stats", parents=[common], help="Round-count statistics over many runs")
    stats.add_argument("--n", type=int, required=True)
    stats.add_argument("--m", type=int, required=True)
    stats.add_argument("--sigma", type=str, default=None, help="Pattern (default: drawn from --seed)")
    stats.add_argument("--trials", type=int, default=100)
    stats.add_argument("--seed", type=int, default=0)
    stats.add_argument("--max-rounds", type=int, default=None, dest="max_rounds")
    stats.set_defaults(handler=cmd_stats)

    primes = sub.add_parser("primes", parents=[common], help="Export P_n, one prime per line")
    primes.add_argument("--n", type=int, required=True)
    primes.set_defaults(handler=cmd_primes)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except ParameterError as e:
        print(f"❌ {e}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(message)s",
        stream=sys.stderr,
    )

    try:
        configure(args.config, sieve_ceiling=args.sieve_ceiling, charsum_ceiling=args.charsum_ceiling)
        return args.handler(args)
    except ParameterError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_USAGE
    except (RoundsExhaustedError, SamplingExhaustedError) as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_FAILURE
    except PatternRSAError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
