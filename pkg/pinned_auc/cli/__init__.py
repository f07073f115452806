"""
Command-line interface.

Exit codes: 0 on success, 1 on usage errors, 2 on data errors. Results go to standard
output (or ``--out``); logs and problem details go to standard error.
"""

import sys
from collections.abc import Sequence

from .. import __version__
from ..core.config import get_settings
from ..core.exceptions import PinnedAucError
from ..core.observability import get_logger, setup_structured_logging
from . import data, experiments, metrics
from .common import ArgumentParser

logger = get_logger(__name__)


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="pinned-auc",
        description="Pinned AUC decomposition and threshold-agnostic subgroup bias metrics",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="command")
    data.register(subparsers)
    metrics.register(subparsers)
    experiments.register(subparsers)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help(sys.stderr)
            return 1
        settings = get_settings()
        setup_structured_logging(settings)
        logger.debug("Command started", command=args.command)
        return int(args.handler(args, settings))
    except PinnedAucError as e:
        sys.stderr.write(e.to_json() + "\n")
        return e.exit_code


__all__ = ["build_parser", "main"]
