"""
Multiplicadores para programas infinitos discretizados.

Este módulo contém:
- lemma_value: inf_x max{sup_λ f_λ(x), f(x) - f(x⁰)}, que vale 0 quando x⁰ é ótimo
- slater_check: condição de Slater (forte) e sua versão fraca
- fritz_john / kkt: certificados (ρ, φ) ou a testemunha de que não existem
- lagrangian_value / check_saddle: Lagrangiano e ponto de sela
- truncation_study: o contra-exemplo -x³/n truncado a N restrições

Funcionais positivos Φ₀ ∈ ℓ∞(Λ)*₊ são representados apenas por vetores de
pesos não negativos (a parte ℓ¹).
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, List, Optional, Sequence, Tuple, Union

import numpy as np

from infsup.config.solver_settings import solver_settings
from infsup.exceptions import InstanceError, NumericalFailureError, PreconditionError
from infsup.instance import (
    as_mode, assert_optimal, column_maxima, combined_family, generate_paper_example,
)
from infsup.konig import check_infsup_convexity, extract_witness
from infsup.lp_core import minimax, pure_value
from infsup.models import (
    CertificateKind, ConvexityWitness, MultiplierCertificate, ProgramInstance, SaddleReport,
    ScalarMode, SlaterReport, StudyEntry, StudyReport, VerdictKind,
)
from infsup.utils.scalars import (
    Scalar, as_vector, exact_sum, one, scaled_tolerance, to_scalar, tolerance, zero,
)

logger = logging.getLogger(__name__)

LIMIT_NOTE = (
    "The full family (-x^3/n)_n together with f(x) = x is infsup-convex on the real line "
    "(established analytically, not computed here); every finite truncation on a grid mixing "
    "negative points with larger positive ones fails, and the gap shrinks as N grows."
)


def _tol(tol: Any, mode: ScalarMode) -> Scalar:
    return tolerance(solver_settings.DEFAULT_TOLERANCE if tol is None else tol, mode)


def _plain(value: Scalar, mode: ScalarMode) -> Scalar:
    return value if mode == ScalarMode.EXACT else float(value)


def lemma_value(inst: ProgramInstance) -> Tuple[Scalar, int]:
    """
    min_x max{ max_λ G[λ][x], f(x) - f(x⁰) } na amostra, com a coluna que o atinge.

    Negative values mean x⁰ is not optimal on the sample; that is reported, not raised.
    """
    value, column = pure_value(combined_family(inst))
    return _plain(value, inst.scalar_mode), column


def slater_check(inst: ProgramInstance, tol: Any = None) -> SlaterReport:
    """
    Strong form: some column with max_λ G[λ][x] < -tol.
    Weak form: some column where every row is below -tol.
    """
    mode = inst.scalar_mode
    t = _tol(tol, mode)
    maxima = column_maxima(inst.constraint_matrix())
    best, _ = min(enumerate(maxima), key=lambda item: (item[1], item[0]))
    margin = maxima[best]
    weak_columns = [j for j in range(inst.n) if maxima[j] < -t]
    strong = bool(margin < -t)
    return SlaterReport(
        strong_holds=strong,
        strong_witness_index=best if strong else None,
        strong_margin=_plain(margin, mode),
        weak_holds=bool(weak_columns),
        weak_witness_index=best if weak_columns else None,
        weak_columns=weak_columns,
    )


def lagrangian_value(inst: ProgramInstance, x_index: int, phi: Sequence[Any]) -> Scalar:
    """L(x, Φ) = f(x) + φᵀG(·, x)."""
    mode = inst.scalar_mode
    if isinstance(x_index, bool) or not isinstance(x_index, int) or not 0 <= x_index < inst.n:
        raise InstanceError(f"index {x_index!r} out of range 0..{inst.n - 1}", "x_index")
    weights = _multiplier_vector(inst, phi)
    G = inst.constraint_matrix()
    value = inst.objective_vector()[x_index] + weights @ G[:, x_index]
    return _plain(value, mode)


def _multiplier_vector(inst: ProgramInstance, phi: Sequence[Any]) -> np.ndarray:
    if len(phi) != inst.L:
        raise InstanceError(f"multiplier has {len(phi)} entries, expected {inst.L}", "phi")
    try:
        weights = as_vector(phi, inst.scalar_mode)
    except ValueError as e:
        raise InstanceError(str(e), "phi")
    for i, w in enumerate(weights):
        if w < 0:
            raise InstanceError("multiplier entries must be nonnegative", f"phi[{i}]")
    return weights


def check_saddle(inst: ProgramInstance, phi: Sequence[Any], tol: Any = None) -> SaddleReport:
    """
    Verifica se (x⁰, Φ₀) é ponto de sela do Lagrangiano.

    A desigualdade da esquerda, para todo Υ positivo, equivale a G(·, x⁰) <= tol
    e |Φ₀ᵀG(·, x⁰)| <= tol; a da direita é varrida em todos os x amostrados.
    """
    if inst.x0_index is None:
        raise InstanceError("x0_index is required for this operation", "x0_index")
    mode = inst.scalar_mode
    t = _tol(tol, mode)
    x0 = inst.x0_index
    weights = _multiplier_vector(inst, phi)
    G = inst.constraint_matrix()
    lagrangian = inst.objective_vector() + weights @ G

    worst_row = np.max(G[:, x0])
    complementarity = abs(weights @ G[:, x0])
    left_ok = bool(worst_row <= t and complementarity <= t)

    drop = lagrangian[x0] - lagrangian
    violating = int(np.argmax(drop))
    right_ok = bool(drop[violating] <= t)

    worst = max(zero(mode), worst_row, complementarity, drop[violating])
    return SaddleReport(
        left_ok=left_ok, right_ok=right_ok,
        worst_violation=_plain(worst, mode),
        violating_index=None if right_ok else violating,
    )


def normalize_multiplier(phi0: Sequence[Any], mode: ScalarMode = ScalarMode.FLOAT) -> Tuple[Scalar, List[Scalar]]:
    """(ρ, φ) = (1, Φ₀) / (1 + ΣΦ₀): a Lagrange multiplier as a point of Δ_{Λ₀}."""
    weights = [to_scalar(w, mode) for w in phi0]
    scale = one(mode) + exact_sum(weights, mode)
    return one(mode) / scale, [w / scale for w in weights]


def verify_certificate(inst: ProgramInstance, rho: Any, phi: Sequence[Any]) -> Tuple[Scalar, Scalar]:
    """
    Recomputes the Fritz John residuals by direct arithmetic.

    Returns (lagrangian_min_residual, complementarity_residual) with
    lagrangian_min_residual = -min_x [ρ(f(x) - f(x⁰)) + φᵀG(·, x)] and
    complementarity_residual = |φᵀG(·, x⁰)|.
    """
    if inst.x0_index is None:
        raise InstanceError("x0_index is required for this operation", "x0_index")
    mode = inst.scalar_mode
    r = to_scalar(rho, mode)
    if r < 0:
        raise InstanceError("rho must be nonnegative", "rho")
    weights = _multiplier_vector(inst, phi)
    f = inst.objective_vector()
    G = inst.constraint_matrix()
    x0 = inst.x0_index
    weighted = r * (f - f[x0]) + weights @ G
    return _plain(-np.min(weighted), mode), _plain(abs(weights @ G[:, x0]), mode)


def _check_x0(inst: ProgramInstance, t: Scalar) -> None:
    gap = assert_optimal(inst, t)
    if gap > t:
        label = inst.x_labels[inst.x0_index]
        logger.warning("x0 (%s) is not optimal on the sample, gap %s", label, gap)
        raise PreconditionError(f"x0 ({label}) is not optimal on the sample (gap {gap})")


def fritz_john(inst: ProgramInstance, tol: Any = None,
               mode: Optional[ScalarMode] = None) -> Union[MultiplierCertificate, ConvexityWitness]:
    """
    Certificado de Fritz John (ρ, φ) com ρ + Σφ = 1, ou a testemunha de que a
    família (f_λ) ∪ (f - f(x⁰)) não é infsup-convexa na amostra (e portanto
    nenhum certificado existe nesta amostra).

    Raises:
        InstanceError: x0_index ausente
        PreconditionError: x⁰ inviável ou não ótimo na amostra
        NumericalFailureError: certificado não passa na verificação de resíduos
    """
    inst = as_mode(inst, mode)
    mode = inst.scalar_mode
    t = _tol(tol, mode)
    if inst.x0_index is None:
        raise InstanceError("x0_index is required for this operation", "x0_index")
    _check_x0(inst, t)

    D0 = combined_family(inst)
    report = minimax(D0, mode, t)
    if report.v_mixed < -t:
        witness = extract_witness(D0, report, mode, t)
        logger.info("no Fritz John certificate on the sample: witness gap %s", witness.gap)
        return witness

    psi = report.phi.weights
    phi, rho = list(psi[:inst.L]), psi[inst.L]
    slack = scaled_tolerance(t, D0, mode)
    if rho <= t:
        # (1, 0) is also a certificate whenever x⁰ minimizes f on the whole sample
        no_phi = [zero(mode)] * inst.L
        lagrangian_res, comp_res = verify_certificate(inst, one(mode), no_phi)
        if lagrangian_res <= slack and comp_res <= slack:
            logger.debug("dual has rho=%s; using rho=1, phi=0 instead", rho)
            phi, rho = no_phi, one(mode)
    lagrangian_res, comp_res = verify_certificate(inst, rho, phi)
    if lagrangian_res > slack or comp_res > slack:
        raise NumericalFailureError(
            f"Fritz John certificate fails verification: lagrangian residual {lagrangian_res}, "
            f"complementarity residual {comp_res}")
    logger.info("Fritz John certificate found with rho=%s", rho)
    return MultiplierCertificate(
        rho=rho, phi=phi, normalized=True, kind=CertificateKind.FRITZ_JOHN,
        lagrangian_min_residual=lagrangian_res, complementarity_residual=comp_res,
    )


def _as_kkt(cert: MultiplierCertificate, kkt_multiplier: List[Scalar]) -> MultiplierCertificate:
    return MultiplierCertificate(
        rho=cert.rho, phi=cert.phi, normalized=cert.normalized, kind=CertificateKind.KKT,
        lagrangian_min_residual=cert.lagrangian_min_residual,
        complementarity_residual=cert.complementarity_residual,
        kkt_multiplier=kkt_multiplier,
    )


def kkt(inst: ProgramInstance, tol: Any = None,
        mode: Optional[ScalarMode] = None) -> Union[MultiplierCertificate, ConvexityWitness]:
    """
    Multiplicador de Lagrange / KKT sob a condição de Slater.

    Devolve o certificado com ρ > tol e o multiplicador não normalizado
    Φ₀ = φ/ρ, ou a testemunha (pela equivalência, nenhum multiplicador existe).

    Raises:
        PreconditionError: Slater falha na amostra, ou precondições de fritz_john
        NumericalFailureError: ρ <= tol apesar de Slater
    """
    inst = as_mode(inst, mode)
    mode = inst.scalar_mode
    t = _tol(tol, mode)
    slater = slater_check(inst, t)
    if not slater.strong_holds:
        logger.warning("Slater condition fails on the sample (margin %s)", slater.strong_margin)
        raise PreconditionError(
            f"Slater condition fails on the sample: best column margin {slater.strong_margin}")

    result = fritz_john(inst, t)
    if isinstance(result, ConvexityWitness):
        return result
    if result.rho <= t:
        raise NumericalFailureError(
            f"rho={result.rho} <= tol despite the Slater column {inst.x_labels[slater.strong_witness_index]}")
    multiplier = [w / result.rho for w in result.phi]
    logger.info("KKT multiplier %s", multiplier)
    return _as_kkt(result, multiplier)


def certificate_from_multiplier(inst: ProgramInstance, phi0: Sequence[Any],
                                tol: Any = None) -> MultiplierCertificate:
    """
    Turns a Lagrange multiplier forming a saddle point with x⁰ into a normalized
    certificate (ρ, φ) = (1, Φ₀)/(1 + ΣΦ₀).

    Raises:
        PreconditionError: (x⁰, Φ₀) is not a saddle point on the sample
    """
    mode = inst.scalar_mode
    t = _tol(tol, mode)
    saddle = check_saddle(inst, phi0, t)
    if not saddle.is_saddle:
        raise PreconditionError(f"(x0, phi) is not a saddle point (worst violation {saddle.worst_violation})")
    rho, phi = normalize_multiplier(phi0, mode)
    lagrangian_res, comp_res = verify_certificate(inst, rho, phi)
    return MultiplierCertificate(
        rho=rho, phi=phi, normalized=True, kind=CertificateKind.KKT,
        lagrangian_min_residual=lagrangian_res, complementarity_residual=comp_res,
        kkt_multiplier=[to_scalar(w, mode) for w in phi0],
    )


def _study_grid_check(points: List[Scalar]) -> None:
    if not any(x == 0 for x in points):
        raise PreconditionError("study grid must contain 0")
    negatives = [x for x in points if x < 0]
    if not negatives:
        raise PreconditionError("study grid must contain a negative point")
    largest = max(points)
    if not largest > 1:
        raise PreconditionError("study grid must contain a point greater than 1")
    # a mixture of x_neg and x_big has positive mean cube and negative mean only when |x_neg| < x_big
    if not any(-x < largest for x in negatives):
        raise PreconditionError("study grid needs a negative point closer to 0 than its largest point")


def _study_entry(N: int, grid: Sequence[Any], t: Scalar, mode: ScalarMode) -> StudyEntry:
    inst = generate_paper_example(N, grid, mode)
    slater = slater_check(inst, t)
    verdict = check_infsup_convexity(combined_family(inst), t, mode)
    witness = verdict.witness
    return StudyEntry(
        n=N, slater=slater, v_pure=verdict.v_pure, v_mixed=verdict.v_mixed,
        verdict=verdict.kind, witness=witness, gap=witness.gap if witness else None,
    )


def truncation_study(N_list: Sequence[int], grid: Sequence[Any], tol: Any = None,
                     mode: ScalarMode = ScalarMode.FLOAT) -> StudyReport:
    """
    Estudo do contra-exemplo truncado: para cada N, Slater, v_mixed da família
    combinada, veredicto e gap da testemunha.

    Entries are ordered by N. The trend (v_mixed < 0 for every N and
    nondecreasing in N) is asserted; a violation is a numerical failure.
    """
    t = _tol(tol, mode)
    if not N_list:
        raise PreconditionError("N list must be nonempty")
    for N in N_list:
        if isinstance(N, bool) or not isinstance(N, int) or N < 1:
            raise PreconditionError(f"N must be a positive integer, got {N!r}")
    _study_grid_check([to_scalar(x, mode) for x in grid])

    ordered = sorted(set(N_list))
    with ThreadPoolExecutor(max_workers=solver_settings.STUDY_MAX_WORKERS) as pool:
        entries = list(pool.map(lambda N: _study_entry(N, grid, t, mode), ordered))

    all_negative = all(e.v_mixed < -t for e in entries)
    nondecreasing = all(later.v_mixed >= earlier.v_mixed - t for earlier, later in zip(entries, entries[1:]))
    for e in entries:
        logger.info("N=%d: slater margin %s, v_mixed %s, verdict %s",
                    e.n, e.slater.strong_margin, e.v_mixed, e.verdict.value)
    if not (all_negative and nondecreasing) or any(e.verdict != VerdictKind.WITNESS for e in entries):
        raise NumericalFailureError(
            f"truncation trend violated: all_negative={all_negative}, nondecreasing={nondecreasing}")
    return StudyReport(entries=entries, all_negative=all_negative,
                       nondecreasing=nondecreasing, limit_note=LIMIT_NOTE)
