"""
Argumentos e resolução de entradas compartilhados por todos os subcomandos.
"""
import argparse
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from infsup.config.solver_settings import solver_settings
from infsup.exceptions import EXIT_NEGATIVE, EXIT_POSITIVE, InstanceError
from infsup.instance import combined_family, generate_convex_demo, generate_paper_example, load_instance
from infsup.models import ConvexityWitness, ProgramInstance, Report, ScalarMode, SimplexVector
from infsup.utils.io_helpers import load_matrix, parse_number_list
from infsup.utils.scalars import Scalar, to_scalar, tolerance

PAPER_GRID = "-2,-1,-0.5,0,0.5,1,2,10"
CONVEX_GRID = ",".join(str(-3 + k * 0.25) for k in range(17))  # -3..1 step 0.25
EXAMPLES = ("paper", "convex")

VERDICT_EXIT = {
    "certificate": EXIT_POSITIVE,
    "convex": EXIT_POSITIVE,
    "holds": EXIT_POSITIVE,
    "value": EXIT_POSITIVE,
    "witness": EXIT_NEGATIVE,
    "fails": EXIT_NEGATIVE,
}


@dataclass
class Context:
    mode: ScalarMode
    tol: Scalar


def common_parser() -> argparse.ArgumentParser:
    """Flags accepted by every subcommand."""
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--exact", action="store_true", help="exact rational arithmetic")
    parser.add_argument("--tol", type=float, default=None,
                        help=f"tolerance (default {solver_settings.DEFAULT_TOLERANCE})")
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--json", metavar="PATH", help="instance JSON file")
    source.add_argument("--csv", metavar="PATH", help="bare matrix CSV file (rows = family members)")
    source.add_argument("--example", choices=EXAMPLES, help="builtin generator")
    parser.add_argument("--grid", help="comma-separated sample of X for --example")
    parser.add_argument("--n", type=int, default=None, help="truncation N for --example paper (default 1)")
    parser.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    parser.add_argument("--verbose", action="store_true", help="debug logging on stderr")
    return parser


def context_from(args: argparse.Namespace) -> Context:
    mode = ScalarMode.EXACT if args.exact else ScalarMode.FLOAT
    tol = solver_settings.DEFAULT_TOLERANCE if args.tol is None else args.tol
    try:
        return Context(mode=mode, tol=tolerance(tol, mode))
    except ValueError as e:
        raise InstanceError(str(e), "--tol")


def grid_from(args: argparse.Namespace, ctx: Context, default: str) -> list:
    # argparse keeps a leading space so grids like " -2,-1" are not taken for flags
    return parse_number_list(args.grid if args.grid else default, ctx.mode, "--grid")


def truncation_from(args: argparse.Namespace) -> int:
    return 1 if args.n is None else args.n


def reject_generator_flags(args: argparse.Namespace) -> None:
    """--grid and --n only shape the builtin generators."""
    if args.json or args.csv:
        for flag, value in (("--grid", args.grid), ("--n", args.n)):
            if value is not None:
                raise InstanceError("only valid with --example", flag)


def load_program(args: argparse.Namespace, ctx: Context) -> ProgramInstance:
    reject_generator_flags(args)
    if args.json:
        return load_instance(args.json, ctx.mode)
    if args.example == "paper":
        return generate_paper_example(truncation_from(args), grid_from(args, ctx, PAPER_GRID), ctx.mode)
    if args.example == "convex":
        return generate_convex_demo(grid_from(args, ctx, CONVEX_GRID), ctx.mode)
    if args.csv:
        raise InstanceError("this command needs an instance (--json or --example), not a bare matrix", "--csv")
    raise InstanceError("no input given: use --json or --example")


def load_game_matrix(args: argparse.Namespace, ctx: Context) -> np.ndarray:
    """--csv as given; an instance becomes its combined family (f_λ) ∪ (f - f(x⁰))."""
    if args.csv:
        reject_generator_flags(args)
        return load_matrix(args.csv, ctx.mode)
    return combined_family(load_program(args, ctx))


def make_report(command: str, verdict: str, payload: Dict[str, Any], ctx: Context) -> Report:
    return Report(command=command, verdict=verdict, payload=payload,
                  tolerance=ctx.tol, scalar_mode=ctx.mode)


def exit_code_for(report: Report) -> int:
    return VERDICT_EXIT[report.verdict]


def input_echo(args: argparse.Namespace) -> Dict[str, Optional[Any]]:
    """Which input produced the report, so `verify` can rebuild it."""
    return {"json": args.json, "csv": args.csv, "example": args.example,
            "grid": args.grid, "n": truncation_from(args) if args.example == "paper" else None}


def witness_payload(witness: ConvexityWitness) -> Dict[str, Any]:
    return {"support": witness.support, "weights": witness.weights.weights,
            "lhs": witness.lhs, "rhs": witness.rhs, "gap": witness.gap}


def witness_from_payload(data: Dict[str, Any], mode: ScalarMode) -> ConvexityWitness:
    """Rebuilds a witness from a report; malformed weights raise InstanceError."""
    try:
        return ConvexityWitness(
            support=[int(j) for j in data["support"]],
            weights=SimplexVector(weights=[to_scalar(w, mode) for w in data["weights"]], scalar_mode=mode),
            lhs=to_scalar(data["lhs"], mode), rhs=to_scalar(data["rhs"], mode), gap=to_scalar(data["gap"], mode),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise InstanceError(f"malformed witness: {e}", "payload.witness")
