"""
Subcomandos de multiplicadores: fritz-john, kkt, saddle, slater e study.
"""
import argparse
import logging

from infsup.commands.common import (
    PAPER_GRID, Context, grid_from, input_echo, load_program, make_report, witness_payload,
)
from infsup.exceptions import InstanceError
from infsup.models import ConvexityWitness, MultiplierCertificate, Report
from infsup.multipliers import (
    certificate_from_multiplier, check_saddle, fritz_john, kkt, lemma_value, slater_check, truncation_study,
)
from infsup.utils.io_helpers import parse_number_list

logger = logging.getLogger(__name__)


def certificate_payload(cert: MultiplierCertificate) -> dict:
    payload = {
        "kind": cert.kind.value,
        "rho": cert.rho,
        "phi": cert.phi,
        "lagrangian_min_residual": cert.lagrangian_min_residual,
        "complementarity_residual": cert.complementarity_residual,
    }
    if cert.kkt_multiplier is not None:
        payload["kkt_multiplier"] = cert.kkt_multiplier
    return payload


def _multiplier_report(command: str, solver, args: argparse.Namespace, ctx: Context) -> Report:
    inst = load_program(args, ctx)
    result = solver(inst, ctx.tol)
    value, column = lemma_value(inst)
    payload = {"input": input_echo(args), "x0_index": inst.x0_index,
               "lemma_value": value, "lemma_column": column}
    if isinstance(result, ConvexityWitness):
        payload["witness"] = witness_payload(result)
        return make_report(command, "witness", payload, ctx)
    payload["certificate"] = certificate_payload(result)
    return make_report(command, "certificate", payload, ctx)


def run_fritz_john(args: argparse.Namespace, ctx: Context) -> Report:
    return _multiplier_report("fritz-john", fritz_john, args, ctx)


def run_kkt(args: argparse.Namespace, ctx: Context) -> Report:
    return _multiplier_report("kkt", kkt, args, ctx)


def run_saddle(args: argparse.Namespace, ctx: Context) -> Report:
    inst = load_program(args, ctx)
    if not args.phi:
        raise InstanceError("a multiplier is required", "--phi")
    phi = parse_number_list(args.phi, ctx.mode, "--phi")
    saddle = check_saddle(inst, phi, ctx.tol)
    payload = {
        "input": input_echo(args),
        "phi": phi,
        "left_ok": saddle.left_ok,
        "right_ok": saddle.right_ok,
        "worst_violation": saddle.worst_violation,
        "violating_index": saddle.violating_index,
    }
    if not saddle.is_saddle:
        return make_report("saddle", "fails", payload, ctx)
    payload["certificate"] = certificate_payload(certificate_from_multiplier(inst, phi, ctx.tol))
    return make_report("saddle", "holds", payload, ctx)


def run_slater(args: argparse.Namespace, ctx: Context) -> Report:
    inst = load_program(args, ctx)
    slater = slater_check(inst, ctx.tol)
    payload = {
        "input": input_echo(args),
        "strong_holds": slater.strong_holds,
        "strong_witness_index": slater.strong_witness_index,
        "strong_margin": slater.strong_margin,
        "weak_holds": slater.weak_holds,
        "weak_witness_index": slater.weak_witness_index,
        "weak_columns": slater.weak_columns,
    }
    return make_report("slater", "holds" if slater.strong_holds else "fails", payload, ctx)


def parse_n_list(text: str) -> list:
    values = []
    for k, item in enumerate(item.strip() for item in text.split(",")):
        if not item:
            continue
        try:
            values.append(int(item))
        except ValueError:
            raise InstanceError(f"expected a positive integer, got {item!r}", f"--n-list[{k}]")
    if not values:
        raise InstanceError("expected a comma-separated list of integers", "--n-list")
    return values


def run_study(args: argparse.Namespace, ctx: Context) -> Report:
    n_list = parse_n_list(args.n_list)
    grid = grid_from(args, ctx, PAPER_GRID)
    study = truncation_study(n_list, grid, ctx.tol, ctx.mode)
    entries = []
    for entry in study.entries:
        entries.append({
            "n": entry.n,
            "slater_margin": entry.slater.strong_margin,
            "strong_slater": entry.slater.strong_holds,
            "weak_slater": entry.slater.weak_holds,
            "weak_witness_index": entry.slater.weak_witness_index,
            "v_pure": entry.v_pure,
            "v_mixed": entry.v_mixed,
            "verdict": entry.verdict.value,
            "witness": witness_payload(entry.witness),
        })
    payload = {
        "grid": grid,
        "entries": entries,
        "all_negative": study.all_negative,
        "nondecreasing": study.nondecreasing,
        "limit_note": study.limit_note,
    }
    return make_report("study", "witness", payload, ctx)


def register(subparsers, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("fritz-john", parents=[common],
                                   help="normalized Fritz John certificate at x0, or a witness")
    parser.set_defaults(handler=run_fritz_john)

    parser = subparsers.add_parser("kkt", parents=[common],
                                   help="Lagrange multiplier at x0 under Slater, or a witness")
    parser.set_defaults(handler=run_kkt)

    parser = subparsers.add_parser("saddle", parents=[common], help="check (x0, phi) as a saddle point")
    parser.add_argument("--phi", help="comma-separated multiplier, one entry per constraint")
    parser.set_defaults(handler=run_saddle)

    parser = subparsers.add_parser("slater", parents=[common], help="strong and weak Slater conditions")
    parser.set_defaults(handler=run_slater)

    parser = subparsers.add_parser("study", parents=[common],
                                   help="truncated -x^3/n family over several N")
    parser.add_argument("--n-list", default="1,2,4,8", help="comma-separated truncation sizes")
    parser.set_defaults(handler=run_study)
