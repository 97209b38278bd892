"""Command-line entry point."""

import sys
from typing import List, Optional

from app.cli.deps import build_context
from app.cli.router import build_parser
from app.exceptions import AppException
from app.logging_config import get_logger

logger = get_logger(__name__)


def cli_main(argv: Optional[List[str]] = None) -> int:
    """Run one command; returns 0 on success, 2 on usage or config errors, 1 otherwise."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    try:
        context = build_context(args)
        return args.handler(context, args)
    except AppException as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        logger.debug(f"{type(exc).__name__}: {exc.message} {exc.details or ''}".rstrip())
        return exc.exit_code
    except KeyboardInterrupt:
        logger.warning("Interrupted")
        return 130


if __name__ == "__main__":
    sys.exit(cli_main())
