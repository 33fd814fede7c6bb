"""Command-line interface: simulate, decompose, oracle, compare.

Exit codes: 0 success (compare: all z-checks pass), 2 compare failure,
1 usage or I/O error, 3 config parse error, 4 config validation or
degenerate-geometry error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import config as config_mod
from . import decomposition, oracle, scan
from .errors import (
    DegenerateChain,
    DegenerateNormalization,
    ParseError,
    ValidationError,
)

EXIT_OK = 0
EXIT_USAGE_OR_IO = 1
EXIT_COMPARE_FAILED = 2
EXIT_PARSE = 3
EXIT_VALIDATION = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE_OR_IO)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="tpami",
        description=(
            "Two-photon-absorption Michelson interferometer simulator "
            "for broadband chaotic light with polarizers."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        required=True,
        help=f"config file path or preset name ({', '.join(config_mod.PRESET_NAMES)})",
    )

    p_sim = sub.add_parser("simulate", parents=[common],
                           help="run a delay scan and emit the trace")
    p_sim.add_argument("--out", required=True)
    p_sim.add_argument("--format", choices=("csv", "json"), default="csv")

    p_dec = sub.add_parser("decompose", parents=[common],
                           help="emit the 16-term component breakdown at one delay")
    p_dec.add_argument("--delay-fs", type=float, required=True)
    p_dec.add_argument("--out", required=True)
    p_dec.add_argument("--format", choices=("csv", "json"), default="csv")

    p_orc = sub.add_parser("oracle", parents=[common],
                           help="run the Monte-Carlo estimator over the scan grid")
    p_orc.add_argument("--realizations", type=int, required=True)
    p_orc.add_argument("--seed", type=int, required=True)
    p_orc.add_argument("--delays", type=int, default=64,
                       help="number of grid delays (default 64)")
    p_orc.add_argument("--out", required=True)
    p_orc.add_argument("--format", choices=("csv", "json"), default="json")

    p_cmp = sub.add_parser("compare", parents=[common],
                           help="z-test the Monte-Carlo estimator against the closed form")
    p_cmp.add_argument("--realizations", type=int, required=True)
    p_cmp.add_argument("--seed", type=int, required=True)
    p_cmp.add_argument("--delays", type=int, default=64)
    p_cmp.add_argument("--out", help="optional JSON report path")
    return parser


def _grid(config, count: int) -> np.ndarray:
    return np.linspace(config.scan.delay_min_fs, config.scan.delay_max_fs, count) * 1e-15


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_mod.load_config(args.config)
        preset = args.config if args.config in config_mod.PRESET_NAMES else None

        if args.command == "simulate":
            scan.emit(scan.run_scan(cfg, preset_name=preset), args.format, args.out)
            return EXIT_OK

        if args.command == "decompose":
            breakdown = decomposition.classify(cfg, args.delay_fs * 1e-15)
            scan.emit(breakdown, args.format, args.out)
            return EXIT_OK

        if args.command == "oracle":
            run = oracle.mc_trace(cfg, _grid(cfg, args.delays),
                                  args.realizations, args.seed)
            scan.emit(run, args.format, args.out)
            return EXIT_OK

        if args.command == "compare":
            report = oracle.compare_trace(cfg, _grid(cfg, args.delays),
                                          args.realizations, args.seed)
            if args.out:
                scan.emit(report, "json", args.out)
            status = "PASS" if report.passed else "FAIL"
            print(
                f"compare {status}: max |z| = {report.max_abs_z:.3f} over "
                f"{len(report.z_scores)} delays, {len(report.flagged)} flagged"
            )
            return EXIT_OK if report.passed else EXIT_COMPARE_FAILED

    except ParseError as exc:
        print(f"tpami: config parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f"tpami: config validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (DegenerateChain, DegenerateNormalization) as exc:
        print(f"tpami: degenerate configuration: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"tpami: i/o error: {exc}", file=sys.stderr)
        return EXIT_USAGE_OR_IO
    except ValueError as exc:
        print(f"tpami: error: {exc}", file=sys.stderr)
        return EXIT_USAGE_OR_IO

    return EXIT_USAGE_OR_IO


if __name__ == "__main__":
    sys.exit(main())
