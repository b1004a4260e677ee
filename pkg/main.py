# main.py
import argparse
import logging
import re
import sys
from typing import List, Optional, Sequence

import config
from algebra.polynomial import parse_polynomial
from analysis import report
from analysis.orchestrator import RunConfig, cmd_equidist, cmd_roots, cmd_selftest, cmd_weyl
from utils.helpers import (
    parse_checkpoints,
    parse_fraction,
    parse_frequencies,
    parse_rectangles,
    status,
)

# argparse reads "-2,0,1" as an option; these flags take values that may start with a minus
SIGNED_VALUE_FLAGS = ("--f", "--g", "--freq")
_SIGNED_VALUE = re.compile(r"^-\d[\d,:\s-]*$")


def attach_signed_values(argv: Sequence[str]) -> List[str]:
    """Rewrite "--g -2,0,1" as "--g=-2,0,1" for the flags in SIGNED_VALUE_FLAGS."""
    out = []
    i = 0
    while i < len(argv):
        arg = argv[i]
        if arg in SIGNED_VALUE_FLAGS and i + 1 < len(argv) and _SIGNED_VALUE.match(argv[i + 1]):
            out.append(f"{arg}={argv[i + 1]}")
            i += 2
            continue
        out.append(arg)
        i += 1
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Joint equidistribution of roots of polynomial congruences modulo n"
    )

    parser.add_argument('--mode', type=str, default='equidist', choices=['roots', 'weyl', 'equidist', 'selftest'],
                        help="What to run: root tables, Weyl averages, the full equidistribution report, or the self-test.")

    parser.add_argument('--f', type=str, help="Coefficients of f, ascending and comma-separated (1,0,1 is x^2+1).")
    parser.add_argument('--g', type=str, default=None, help="Coefficients of g; defaults to f.")
    parser.add_argument('--x', type=int, default=1000, help="Largest modulus.")
    parser.add_argument('--checkpoints', type=str, default=None,
                        help="Ascending cutoffs, comma-separated. Defaults to powers of 10 up to x.")
    parser.add_argument('--moduli', type=str, default=config.DEFAULT_MODULI, choices=['all', 'prime', 'squarefree'])
    parser.add_argument('--freq', type=str, default=None,
                        help="Frequencies h1:h2, comma-separated (2:-3,-1:0).")
    parser.add_argument('--rect', type=str, default=",".join(config.DEFAULT_RECTANGLES),
                        help="Open boxes a:b:c:d meaning (a,b)x(c,d), comma-separated.")
    parser.add_argument('--grid', type=int, default=config.DEFAULT_GRID_RESOLUTION,
                        help="Anchor grid resolution for the discrepancy bracket.")
    parser.add_argument('--format', type=str, default='csv', choices=report.FORMATS)
    parser.add_argument('--out', type=str, default=None, help="Output file; stdout when omitted.")
    parser.add_argument('--cache', type=str, default=config.DEFAULT_CACHE_PATH,
                        help=f"Root cache directory (default: ${config.CACHE_ENV_VAR}).")
    parser.add_argument('--threads', type=int, default=config.DEFAULT_THREADS)
    parser.add_argument('--eps', type=str, default=config.DEFAULT_EPS, help="Width of the diagonal band.")
    parser.add_argument('--allow-zero', action='store_true', help="Accept the trivial frequency (0,0).")
    parser.add_argument('--quiet', action='store_true', help="Suppress status lines.")
    parser.add_argument('--debug', action='store_true', help="Enable debug logging from the library modules.")
    return parser


def run_config_from_args(args: argparse.Namespace) -> RunConfig:
    if not args.f:
        raise ValueError(f"the '--f' argument is required for '{args.mode}' mode")
    frequencies = parse_frequencies(args.freq) if args.freq else list(config.DEFAULT_FREQUENCIES)
    checkpoints = parse_checkpoints(args.checkpoints, args.x) if args.checkpoints else []
    return RunConfig(
        f=args.f,
        g=args.g,
        x=args.x,
        checkpoints=checkpoints,
        moduli=args.moduli,
        frequencies=frequencies,
        rectangles=parse_rectangles(args.rect),
        grid=args.grid,
        format=args.format,
        out=args.out,
        cache=args.cache,
        threads=args.threads,
        eps=parse_fraction(args.eps),
        allow_zero=args.allow_zero,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    args = build_parser().parse_args(attach_signed_values(argv))
    config.VERBOSE = not args.quiet
    logging.basicConfig(
        level=logging.DEBUG if args.debug else logging.WARNING,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )

    try:
        if args.mode == 'selftest':
            return cmd_selftest()

        run = run_config_from_args(args)

        if args.mode == 'roots':
            table = cmd_roots(run)
            text = report.roots_to_json(table, parse_polynomial(run.f)) if run.format == 'json' else report.roots_to_csv(table)

        elif args.mode == 'weyl':
            rows = cmd_weyl(run)
            if run.format == 'json':
                text = report.weyl_to_json(rows, parse_polynomial(run.f), parse_polynomial(run.g or run.f))
            else:
                text = report.weyl_to_csv(rows)

        else:
            result = cmd_equidist(run)
            text = report.equidist_to_json(result) if run.format == 'json' else report.equidist_to_csv(result)

        report.emit(text, run.out)
        if run.out:
            status(f"[+] Wrote {run.format.upper()} to {run.out}")

    except (ValueError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2

    return 0


if __name__ == "__main__":
    sys.exit(main())
