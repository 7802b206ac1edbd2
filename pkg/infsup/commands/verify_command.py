"""
Subcomando verify: audita um relatório emitido contra a mesma entrada.

Tudo é refeito por aritmética direta sobre a instância ou a matriz; nenhum
LP é resolvido aqui. O modo escalar e a tolerância vêm do próprio relatório.
"""
import argparse
import logging
from typing import Callable, Dict

import numpy as np

from infsup.commands.common import (
    Context, load_game_matrix, load_program, make_report, witness_from_payload,
)
from infsup.exceptions import InstanceError
from infsup.instance import column_maxima, combined_family, generate_paper_example, objective_shifted_family
from infsup.konig import v_pure, verify_functional, verify_witness
from infsup.lp_core import pure_value
from infsup.models import Report, ScalarMode
from infsup.multipliers import check_saddle, verify_certificate
from infsup.utils.io_helpers import parse_report
from infsup.utils.scalars import as_vector, exact_sum, scaled_tolerance, to_scalar, tolerance

logger = logging.getLogger(__name__)

Checks = Dict[str, bool]


def _vector(values, ctx: Context, path: str) -> np.ndarray:
    try:
        return as_vector([to_scalar(v, ctx.mode) for v in values], ctx.mode)
    except (TypeError, ValueError) as e:
        raise InstanceError(str(e), path)


def _scalar(value, ctx: Context, path: str):
    try:
        return to_scalar(value, ctx.mode)
    except (TypeError, ValueError) as e:
        raise InstanceError(str(e), path)


def _in_simplex(weights: np.ndarray, ctx: Context, slack) -> bool:
    return bool(all(w >= 0 for w in weights) and abs(exact_sum(weights, ctx.mode) - 1) <= slack)


def _check_witness(A: np.ndarray, payload: dict, ctx: Context) -> Checks:
    witness = witness_from_payload(payload["witness"], ctx.mode)
    return {"witness_gap": verify_witness(A, witness, ctx.tol, ctx.mode)}


def check_minimax(args: argparse.Namespace, payload: dict, verdict: str, ctx: Context) -> Checks:
    A = load_game_matrix(args, ctx)
    s = scaled_tolerance(ctx.tol, A, ctx.mode)
    mu = _vector(payload["mu"], ctx, "payload.mu")
    phi = _vector(payload["phi"], ctx, "payload.phi")
    if mu.shape[0] != A.shape[1] or phi.shape[0] != A.shape[0]:
        return {"dimensions": False}
    v_mixed = _scalar(payload["v_mixed"], ctx, "payload.v_mixed")
    value, column = pure_value(A)
    return {
        "mu_in_simplex": _in_simplex(mu, ctx, s),
        "phi_in_simplex": _in_simplex(phi, ctx, s),
        "columns_upper_bound": bool(np.max(A @ mu) <= v_mixed + s),
        "rows_lower_bound": bool(np.min(phi @ A) >= v_mixed - s),
        "v_pure": bool(abs(value - _scalar(payload["v_pure"], ctx, "payload.v_pure")) <= s
                       and column == payload["v_pure_column"]),
    }


def check_convexity(args: argparse.Namespace, payload: dict, verdict: str, ctx: Context) -> Checks:
    A = load_game_matrix(args, ctx)
    if verdict == "witness":
        return _check_witness(A, payload, ctx)
    s = scaled_tolerance(ctx.tol, A, ctx.mode)
    phi = _vector(payload["phi"], ctx, "payload.phi")
    if phi.shape[0] != A.shape[0]:
        return {"dimensions": False}
    # min_j (φᵀA)_j bounds every mixture from below
    lhs, _ = v_pure(A, ctx.mode)
    return {"phi_in_simplex": _in_simplex(phi, ctx, s),
            "mixtures_bounded": bool(np.min(phi @ A) >= lhs - ctx.tol - s)}


def check_konig(args: argparse.Namespace, payload: dict, verdict: str, ctx: Context) -> Checks:
    inst = load_program(args, ctx)
    f, G = inst.objective_vector(), inst.constraint_matrix()
    if verdict == "witness":
        return _check_witness(objective_shifted_family(f, G), payload, ctx)
    alpha = _scalar(payload["alpha"], ctx, "payload.alpha")
    phi = _vector(payload["phi"], ctx, "payload.phi")
    ok, _, _ = verify_functional(f, G, alpha, phi, ctx.tol, ctx.mode)
    return {"phi_in_simplex": _in_simplex(phi, ctx, scaled_tolerance(ctx.tol, G, ctx.mode)), "domination": ok}


def check_mazur_orlicz(args: argparse.Namespace, payload: dict, verdict: str, ctx: Context) -> Checks:
    A = load_game_matrix(args, ctx)
    s = scaled_tolerance(ctx.tol, A, ctx.mode)
    phi = _vector(payload["phi"], ctx, "payload.phi")
    if phi.shape[0] != A.shape[0]:
        return {"dimensions": False}
    value = _scalar(payload["value"], ctx, "payload.value")
    upper, _ = v_pure(A, ctx.mode)
    return {"phi_in_simplex": _in_simplex(phi, ctx, s),
            "infimum_attained": bool(abs(np.min(phi @ A) - value) <= s),
            "below_pure_value": bool(value <= upper + s)}


def check_multiplier(args: argparse.Namespace, payload: dict, verdict: str, ctx: Context) -> Checks:
    inst = load_program(args, ctx)
    D0 = combined_family(inst)
    if verdict == "witness":
        return _check_witness(D0, payload, ctx)
    cert = payload["certificate"]
    s = scaled_tolerance(ctx.tol, D0, ctx.mode)
    rho = _scalar(cert["rho"], ctx, "payload.certificate.rho")
    phi = _vector(cert["phi"], ctx, "payload.certificate.phi")
    lagrangian_res, comp_res = verify_certificate(inst, rho, phi)
    checks = {
        "normalized": bool(abs(rho + exact_sum(phi, ctx.mode) - 1) <= s),
        "lagrangian_minimum": bool(lagrangian_res <= s),
        "complementarity": bool(comp_res <= s),
    }
    if "kkt_multiplier" in cert:
        multiplier = _vector(cert["kkt_multiplier"], ctx, "payload.certificate.kkt_multiplier")
        checks["saddle"] = check_saddle(inst, multiplier, s * (1 + exact_sum(multiplier, ctx.mode))).is_saddle
    return checks


def check_saddle_report(args: argparse.Namespace, payload: dict, verdict: str, ctx: Context) -> Checks:
    inst = load_program(args, ctx)
    phi = _vector(payload["phi"], ctx, "payload.phi")
    saddle = check_saddle(inst, phi, ctx.tol)
    return {"saddle_verdict": saddle.is_saddle == (verdict == "holds")}


def check_slater(args: argparse.Namespace, payload: dict, verdict: str, ctx: Context) -> Checks:
    inst = load_program(args, ctx)
    maxima = column_maxima(inst.constraint_matrix())
    if verdict == "fails":
        return {"no_strict_column": bool(all(m >= -ctx.tol for m in maxima))}
    index = payload["strong_witness_index"]
    if not isinstance(index, int) or not 0 <= index < inst.n:
        return {"witness_index": False}
    return {"strict_column": bool(maxima[index] < -ctx.tol)}


def check_study(args: argparse.Namespace, payload: dict, verdict: str, ctx: Context) -> Checks:
    grid = [_scalar(x, ctx, "payload.grid") for x in payload.get("grid") or []]
    if not grid:
        raise InstanceError("study report carries no grid", "payload.grid")
    checks = {}
    for entry in payload["entries"]:
        inst = generate_paper_example(entry["n"], grid, ctx.mode)
        witness = witness_from_payload(entry["witness"], ctx.mode)
        checks[f"n={entry['n']}"] = verify_witness(combined_family(inst), witness, ctx.tol, ctx.mode)
    return checks


CHECKERS: Dict[str, Callable[..., Checks]] = {
    "minimax": check_minimax,
    "convexity": check_convexity,
    "konig": check_konig,
    "mazur-orlicz": check_mazur_orlicz,
    "fritz-john": check_multiplier,
    "kkt": check_multiplier,
    "saddle": check_saddle_report,
    "slater": check_slater,
    "study": check_study,
}


def run_verify(args: argparse.Namespace, ctx: Context) -> Report:
    try:
        with open(args.report, "r", encoding="utf-8") as fh:
            document = parse_report(fh.read())
    except OSError as e:
        raise InstanceError(f"cannot read report: {e.strerror}", args.report)
    except UnicodeDecodeError as e:
        raise InstanceError(f"report is not UTF-8 text: {e.reason}", args.report)

    command = document["command"]
    if command not in CHECKERS:
        raise InstanceError(f"no verifier for command {command!r}", "command")
    try:
        mode = ScalarMode(document["scalar_mode"])
        audit = Context(mode=mode, tol=tolerance(document.get("tolerance", ctx.tol), mode))
    except ValueError as e:
        raise InstanceError(str(e), "scalar_mode")

    try:
        checks = CHECKERS[command](args, document["payload"], document["verdict"], audit)
    except (KeyError, TypeError) as e:
        raise InstanceError(f"report payload is incomplete: {e}", "payload")
    passed = all(checks.values())
    for name, ok in checks.items():
        logger.debug("check %s: %s", name, "ok" if ok else "FAILED")
    payload = {"checked_command": command, "checked_verdict": document["verdict"], "checks": checks}
    return make_report("verify", "holds" if passed else "fails", payload, audit)


def register(subparsers, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("verify", parents=[common],
                                   help="re-check an emitted report against its input, without solving any LP")
    parser.add_argument("--report", required=True, help="report JSON written by another subcommand")
    parser.set_defaults(handler=run_verify)
