import argparse
import logging
import sys
from typing import Optional, Sequence

from .config import settings
from .errors import CutcraftError
from . import commands_bench, commands_decompose, commands_gen, commands_solve

logger = logging.getLogger("cutcraft")

EX_SOFTWARE = 70


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cutcraft", description="Exact solvers for connected and minimal maximum cuts"
    )
    parser.add_argument("--log-level", default=None, help=f"logging level (default {settings.LOG_LEVEL})")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for module in (commands_solve, commands_gen, commands_decompose, commands_bench):
        module.register(subparsers)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=(args.log_level or settings.LOG_LEVEL).upper(),
        format="%(asctime)s %(levelname)s %(name)s %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except CutcraftError as exc:
        logger.error("%s", exc)
        return exc.exit_code
    except OSError as exc:
        logger.error("%s", exc)
        return 2
    except Exception:
        logger.exception("Unhandled error in %s", args.command)
        return EX_SOFTWARE
