"""
Subcomandos do jogo matricial: minimax, convexity, konig e mazur-orlicz.

Matrizes CSV têm uma linha por membro da família e uma coluna por ponto
amostrado; uma instância (--json / --example) entra como a família combinada
(f_λ) ∪ (f - f(x⁰)), exceto em konig, que usa f e as restrições diretamente.
"""
import argparse
import logging

from infsup.commands.common import (
    Context, input_echo, load_game_matrix, load_program, make_report, witness_payload,
)
from infsup.exceptions import InstanceError
from infsup.konig import (
    check_infsup_convexity, critical_alpha, konig_functional, mazur_orlicz_functional, verify_functional,
)
from infsup.lp_core import minimax
from infsup.models import ConvexityWitness, Report, VerdictKind
from infsup.utils.scalars import to_scalar

logger = logging.getLogger(__name__)


def run_minimax(args: argparse.Namespace, ctx: Context) -> Report:
    A = load_game_matrix(args, ctx)
    report = minimax(A, ctx.mode, ctx.tol)
    payload = {
        "input": input_echo(args),
        "v_pure": report.v_pure,
        "v_pure_column": report.v_pure_column,
        "v_mixed": report.v_mixed,
        "mu": report.mu.weights,
        "phi": report.phi.weights,
        "equal": report.equal,
    }
    return make_report("minimax", "value", payload, ctx)


def run_convexity(args: argparse.Namespace, ctx: Context) -> Report:
    A = load_game_matrix(args, ctx)
    verdict = check_infsup_convexity(A, ctx.tol, ctx.mode)
    payload = {"input": input_echo(args), "v_pure": verdict.v_pure, "v_mixed": verdict.v_mixed}
    if verdict.kind == VerdictKind.CONVEX_ON_SAMPLE:
        # the row dual bounds every mixture from below, which `verify` re-checks
        payload["phi"] = minimax(A, ctx.mode, ctx.tol).phi.weights
        return make_report("convexity", "convex", payload, ctx)
    payload["witness"] = witness_payload(verdict.witness)
    return make_report("convexity", "witness", payload, ctx)


def parse_alpha(text: str, f, G, ctx: Context):
    if text == "critical":
        return critical_alpha(f, G, ctx.mode)
    try:
        return to_scalar(text, ctx.mode)
    except ValueError as e:
        raise InstanceError(str(e), "--alpha")


def run_konig(args: argparse.Namespace, ctx: Context) -> Report:
    inst = load_program(args, ctx)
    f, G = inst.objective_vector(), inst.constraint_matrix()
    alpha = parse_alpha(args.alpha, f, G, ctx)
    logger.debug("konig with alpha=%s", alpha)
    result = konig_functional(f, G, alpha, ctx.tol, ctx.mode)
    payload = {"input": input_echo(args), "alpha": alpha}
    if isinstance(result, ConvexityWitness):
        payload["witness"] = witness_payload(result)
        return make_report("konig", "witness", payload, ctx)
    _, residual, worst = verify_functional(f, G, alpha, result.weights, ctx.tol, ctx.mode)
    payload.update({"phi": result.weights, "worst_residual": residual, "worst_column": worst})
    return make_report("konig", "certificate", payload, ctx)


def run_mazur_orlicz(args: argparse.Namespace, ctx: Context) -> Report:
    # matrix columns are the points of ℝ^L
    A = load_game_matrix(args, ctx)
    phi, value = mazur_orlicz_functional(A.T, ctx.tol, ctx.mode)
    payload = {"input": input_echo(args), "phi": phi.weights, "value": value}
    return make_report("mazur-orlicz", "value", payload, ctx)


def register(subparsers, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("minimax", parents=[common], help="pure and mixed values of the matrix game")
    parser.set_defaults(handler=run_minimax)

    parser = subparsers.add_parser("convexity", parents=[common],
                                   help="infsup-convexity verdict on the sample, with witness")
    parser.set_defaults(handler=run_convexity)

    parser = subparsers.add_parser("konig", parents=[common],
                                   help="functional Φ with f + α <= Φ(f_λ) on the sample, or a witness")
    parser.add_argument("--alpha", default="0", help="shift α, or 'critical' for the largest admissible one")
    parser.set_defaults(handler=run_konig)

    parser = subparsers.add_parser("mazur-orlicz", parents=[common],
                                   help="functional attaining the coordinate-max infimum over the hull of the columns")
    parser.set_defaults(handler=run_mazur_orlicz)
