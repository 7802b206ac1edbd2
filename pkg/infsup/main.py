import argparse
import logging
import sys
from typing import List, Optional

from dotenv import load_dotenv

# Carregar variáveis de ambiente do arquivo .env antes de ler as configurações
# Por exemplo, INFSUP_DEFAULT_TOLERANCE=1e-8 no .env
load_dotenv()

from pydantic import ValidationError  # noqa: E402

from infsup import __version__  # noqa: E402
from infsup.commands import game_commands, multiplier_commands, verify_command  # noqa: E402
from infsup.commands.common import common_parser, context_from, exit_code_for  # noqa: E402
from infsup.config.solver_settings import solver_settings  # noqa: E402
from infsup.exceptions import EXIT_NUMERICAL, EXIT_USAGE, InfsupError, InstanceError  # noqa: E402
from infsup.utils.io_helpers import render_report  # noqa: E402

logger = logging.getLogger("infsup")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="infsup",
        description="LP certificates and witnesses for infsup-convexity, König functionals "
                    "and Fritz John / KKT multipliers on sampled infinite programs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True

    common = common_parser()
    game_commands.register(subparsers, common)
    multiplier_commands.register(subparsers, common)
    verify_command.register(subparsers, common)
    return parser


def configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else getattr(logging, solver_settings.LOG_LEVEL.upper(), logging.WARNING)
    logger.setLevel(level)
    # one handler bound to the current sys.stderr per run
    for old in list(logger.handlers):
        logger.removeHandler(old)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    logger.addHandler(handler)


def handle_exception(exc: BaseException) -> int:
    """Writes the diagnostic to stderr and returns the exit code for the failure."""
    if isinstance(exc, InfsupError):
        print(f"error: {exc.detail}", file=sys.stderr)
        return exc.exit_code
    if isinstance(exc, ValidationError):
        first = exc.errors()[0]
        detail = InstanceError(first["msg"], ".".join(str(p) for p in first["loc"]) or None).detail
        print(f"error: {detail}", file=sys.stderr)
        return EXIT_USAGE
    logger.debug("unexpected failure", exc_info=exc)
    print(f"error: internal failure ({type(exc).__name__}: {exc})", file=sys.stderr)
    return EXIT_NUMERICAL


def write_output(text: str, path: Optional[str]) -> None:
    if not path:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as e:
        raise InstanceError(f"cannot write report: {e.strerror}", path)


def run(argv: Optional[List[str]] = None) -> int:
    """Executa um subcomando e devolve o código de saída; nunca propaga exceções."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse already printed usage or help
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    configure_logging(args.verbose)
    try:
        ctx = context_from(args)
        logger.debug("%s in %s mode, tol=%s", args.command, ctx.mode.value, ctx.tol)
        report = args.handler(args, ctx)
        write_output(render_report(report), args.out)
        return exit_code_for(report)
    except Exception as exc:
        return handle_exception(exc)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
