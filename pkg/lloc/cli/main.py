#!/usr/bin/env python3
"""
lloc command line

Usage:
  python -m lloc gen 20 --dist uniform --seed 1 --out inst.lloc
  python -m lloc corrupt inst.lloc --fraction 0.01 --seed 7 --out noisy.lloc
  python -m lloc solve noisy.lloc --b 5 --mode jitter --out report.json
  python -m lloc solve-zero inst.lloc
  python -m lloc eval inst.lloc inst.emb
  python -m lloc oracle small.lloc
  python -m lloc bench grid.yaml --out rows.csv

Exit codes: 0 ok, 1 unexpected error, 2 unreadable input, 3 bad flags,
4 size guard.
"""

import argparse
import logging
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from ..config import EXACT_CAP_MAX, get_settings
from ..core.tournament import FasMethod
from ..core.warmup import LpMode
from ..core.wlloc import RetractionConvention
from ..errors import ConfigError, FormatError, InstanceError, SizeGuardError
from ..models.schemas import Distribution, ExtensionMode, RetractionMode
from ..utils.logging import setup_logging
from .bench import cmd_bench
from .commands import cmd_corrupt, cmd_eval, cmd_gen, cmd_oracle, cmd_solve, cmd_solve_zero

logger = logging.getLogger("lloc.cli")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_PARSE = 2
EXIT_FLAGS = 3
EXIT_SIZE_GUARD = 4


class LlocArgumentParser(argparse.ArgumentParser):
    """Flag errors exit with code 3 instead of argparse's 2"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_FLAGS, f"{self.prog}: error: {message}\n")


def _values(enum_cls):
    return [member.value for member in enum_cls]


def build_parser() -> LlocArgumentParser:
    parser = LlocArgumentParser(prog="lloc", description="Line embeddings from dense ordinal triples")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="Generate a planted instance and its ground truth")
    gen.add_argument("n", type=int, nargs="?", help="Number of points (mixed_gap: 2k+1)")
    gen.add_argument("--dist", choices=_values(Distribution), default=Distribution.UNIFORM.value)
    gen.add_argument("--clusters", type=int, default=5)
    gen.add_argument("--spread", type=float, default=0.01)
    gen.add_argument("--k", type=int, default=None, help="mixed_gap parameter")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True, help="Instance file; ground truth goes to <out>.emb")
    gen.set_defaults(handler=cmd_gen)

    cor = sub.add_parser("corrupt", help="Flip a fraction of the constraints")
    cor.add_argument("instance")
    cor.add_argument("--fraction", type=float, required=True)
    cor.add_argument("--seed", type=int, default=0)
    cor.add_argument("--out", required=True)
    cor.set_defaults(handler=cmd_corrupt)

    solve = sub.add_parser("solve", help="Run the approximation pipeline")
    solve.add_argument("instance")
    size = solve.add_mutually_exclusive_group(required=True)
    size.add_argument("--b", type=int, help="Bucket count")
    size.add_argument("--eps", type=float, help="Noise level; b = max(3, ceil(eps^(-1/8)))")
    solve.add_argument("--fas", choices=[FasMethod.INDEGREE.value, FasMethod.INDEGREE_LOCAL.value],
                       default=FasMethod.INDEGREE_LOCAL.value)
    solve.add_argument("--mode", choices=_values(ExtensionMode), default=ExtensionMode.COLLAPSE.value)
    solve.add_argument("--select", choices=["auto", "exact", "estimate"], default="auto")
    solve.add_argument("--samples", type=int, default=None)
    solve.add_argument("--exact-cap", type=int, default=None, help=f"At most {EXACT_CAP_MAX}")
    solve.add_argument("--restarts", type=int, default=None)
    solve.add_argument("--retraction", choices=_values(RetractionMode), default=RetractionMode.WEIGHTED.value)
    solve.add_argument("--convention", choices=_values(RetractionConvention),
                       default=RetractionConvention.DIRECT.value)
    solve.add_argument("--pivots", default=None, help="Comma separated pivot list (default: all)")
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--threads", type=int, default=None)
    solve.add_argument("--no-timings", action="store_true", help="Omit timings_ms from the report")
    solve.add_argument("--dump-wlloc", default=None, metavar="DIR")
    solve.add_argument("--out", default=None)
    solve.set_defaults(handler=cmd_solve)

    zero = sub.add_parser("solve-zero", help="Exact algorithm for perfectly satisfiable instances")
    zero.add_argument("instance")
    zero.add_argument("--lp", choices=_values(LpMode), default=LpMode.FLOAT.value)
    zero.add_argument("--out", default=None)
    zero.set_defaults(handler=cmd_solve_zero)

    ev = sub.add_parser("eval", help="Score an embedding")
    ev.add_argument("instance")
    ev.add_argument("embedding")
    ev.set_defaults(handler=cmd_eval)

    oracle = sub.add_parser("oracle", help="Global optimum for tiny instances")
    oracle.add_argument("instance")
    oracle.add_argument("--exact-cap", type=int, default=None)
    oracle.add_argument("--cells", action="store_true", help="Also enumerate every realizable cell (n <= 4)")
    oracle.add_argument("--out", default=None)
    oracle.set_defaults(handler=cmd_oracle)

    bench = sub.add_parser("bench", help="Run a YAML benchmark grid")
    bench.add_argument("config")
    bench.add_argument("--out", required=True, help="CSV output")
    bench.add_argument("--threads", type=int, default=None)
    bench.set_defaults(handler=cmd_bench)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        settings = get_settings()
        level = "DEBUG" if args.verbose else settings.log_level
    except ValidationError as e:
        level = "INFO"
        setup_logging(level)
        logger.error(f"Invalid environment configuration: {e}")
        return EXIT_FLAGS
    setup_logging(level)

    try:
        return args.handler(args)

    except FormatError as e:
        logger.error(f"Parse error: {e}")
        return EXIT_PARSE

    except OSError as e:
        logger.error(f"Cannot read or write file: {e}")
        return EXIT_PARSE

    except (ConfigError, ValidationError, InstanceError) as e:
        logger.error(f"Invalid arguments: {e}")
        return EXIT_FLAGS

    except SizeGuardError as e:
        logger.error(f"Size guard: {e}")
        return EXIT_SIZE_GUARD

    except Exception as e:
        logger.error(f"Unexpected error: {str(e)}", exc_info=True)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
