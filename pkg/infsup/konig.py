"""
Infsup-convexidade e funcionais de König / Mazur–Orlicz.

Tudo aqui é corolário do LP minimax de lp_core: a família (linhas) é
infsup-convexa na amostra exatamente quando misturar pontos amostrados não
melhora o melhor ponto puro, e nesse caso o dual das linhas é o funcional
Φ ∈ Δ_Λ procurado. Quando não é, a mistura ótima μ é a testemunha.

Veredictos valem para a amostra dada; Λ é usado como foi fornecido.
"""
import logging
from typing import Any, Sequence, Tuple, Union

import numpy as np

from infsup.config.solver_settings import solver_settings
from infsup.exceptions import InstanceError, NumericalFailureError, PreconditionError
from infsup.instance import objective_shifted_family
from infsup.lp_core import minimax, pure_value
from infsup.models import (
    ConvexityVerdict, ConvexityWitness, MinimaxReport, ScalarMode, SimplexVector, VerdictKind,
)
from infsup.utils.scalars import Scalar, as_matrix, as_vector, exact_sum, scaled_tolerance, tolerance

logger = logging.getLogger(__name__)


def _matrix(A: Any, mode: ScalarMode, path: str = "matrix") -> np.ndarray:
    try:
        return as_matrix(A.tolist() if isinstance(A, np.ndarray) else A, mode)
    except ValueError as e:
        raise InstanceError(str(e), path)


def _tol(tol: Any, mode: ScalarMode) -> Scalar:
    return tolerance(solver_settings.DEFAULT_TOLERANCE if tol is None else tol, mode)


def _plain(value: Scalar, mode: ScalarMode) -> Scalar:
    return value if mode == ScalarMode.EXACT else float(value)


def v_pure(A: Any, mode: ScalarMode = ScalarMode.FLOAT) -> Tuple[Scalar, int]:
    """inf_x sup_λ restrito à amostra: min das colunas do max das linhas (empate: menor índice)."""
    value, column = pure_value(_matrix(A, mode))
    return _plain(value, mode), column


def mixture_value(M: np.ndarray, support: Sequence[int], weights: Sequence[Scalar]) -> Scalar:
    """sup_λ Σ_j t_j f_λ(x_j) for the given support and weights."""
    t = np.array(list(weights), dtype=M.dtype)
    return np.max(M[:, list(support)] @ t)


def extract_witness(M: np.ndarray, report: MinimaxReport, mode: ScalarMode, tol: Scalar,
                    lhs: Scalar = None) -> ConvexityWitness:
    """
    Builds the witness from the optimal basic mixture μ.

    Float mode prunes weights <= tol and renormalizes; rhs and gap are then
    recomputed from the matrix, so the pruning error is part of the reported gap.
    """
    if lhs is None:
        lhs = pure_value(M)[0]
    weights = report.mu.weights
    floor = 0 if mode == ScalarMode.EXACT else tol
    support = [j for j, w in enumerate(weights) if w > floor]
    if not support:
        raise NumericalFailureError("optimal mixture has empty support")
    total = exact_sum([weights[j] for j in support], mode)
    t = SimplexVector.project([weights[j] / total for j in support], mode)
    rhs = mixture_value(M, support, t.weights)
    gap = lhs - rhs
    if gap <= tol:
        raise NumericalFailureError(
            f"mixture gap {gap} does not exceed the tolerance {tol}; verdict is inside the tolerance band")
    if len(support) > M.shape[0] + 1:
        logger.warning("witness support %d exceeds the basic solution bound %d", len(support), M.shape[0] + 1)
    return ConvexityWitness(
        support=support, weights=t,
        lhs=_plain(lhs, mode), rhs=_plain(rhs, mode), gap=_plain(gap, mode),
    )


def check_infsup_convexity(A: Any, tol: Any = None, mode: ScalarMode = ScalarMode.FLOAT) -> ConvexityVerdict:
    """
    Decide se a família (linhas de A) é infsup-convexa sobre as colunas amostradas.

    ConvexOnSample sse v_mixed >= v_pure - tol: pela otimalidade do LP isso
    cobre simultaneamente todo m, todo t ∈ Δ_m e todos os pontos x_j da amostra.
    Caso contrário devolve a testemunha extraída da mistura ótima.
    """
    M = _matrix(A, mode)
    t = _tol(tol, mode)
    report = minimax(M, mode, t)
    if report.equal:
        logger.info("family is infsup-convex on the sample (v_pure=%s, v_mixed=%s)", report.v_pure, report.v_mixed)
        return ConvexityVerdict(kind=VerdictKind.CONVEX_ON_SAMPLE, v_pure=report.v_pure, v_mixed=report.v_mixed)
    witness = extract_witness(M, report, mode, t, lhs=report.v_pure)
    logger.info("infsup-convexity fails on the sample, gap %s on %d points", witness.gap, len(witness.support))
    return ConvexityVerdict(kind=VerdictKind.WITNESS, witness=witness,
                            v_pure=report.v_pure, v_mixed=report.v_mixed)


def verify_functional(f: Any, G: Any, alpha: Any, phi: Sequence[Any],
                      tol: Any = None, mode: ScalarMode = ScalarMode.FLOAT) -> Tuple[bool, Scalar, int]:
    """
    Checks f(x) + α <= Φᵀ(G column at x) + tol on every sampled column by direct arithmetic.

    Returns (ok, worst residual, worst column); the residual is min_x [ΦᵀG(x) - f(x) - α].
    """
    G_m = _matrix(G, mode, "constraints")
    f_v = as_vector(f, mode)
    weights = as_vector(phi, mode)
    if weights.shape[0] != G_m.shape[0]:
        raise InstanceError(f"functional has {weights.shape[0]} weights, expected {G_m.shape[0]}", "phi")
    t = _tol(tol, mode)
    if f_v.shape[0] != G_m.shape[1]:
        raise InstanceError(f"objective has {f_v.shape[0]} entries, expected {G_m.shape[1]}", "objective")
    slack = weights @ G_m - f_v - as_vector([alpha], mode)[0]
    worst = int(np.argmin(slack))
    residual = slack[worst]
    return bool(residual >= -t), _plain(residual, mode), worst


def verify_witness(A: Any, witness: ConvexityWitness, tol: Any = None,
                   mode: ScalarMode = ScalarMode.FLOAT) -> bool:
    """Recomputes lhs = v_pure and rhs = sup_λ Σ t_j A[λ][x_j]; true iff the gap exceeds tol."""
    M = _matrix(A, mode)
    t = _tol(tol, mode)
    if any(j < 0 or j >= M.shape[1] for j in witness.support):
        return False
    if len(witness.support) != witness.weights.dimension:
        return False
    lhs = pure_value(M)[0]
    rhs = mixture_value(M, witness.support, as_vector(witness.weights.weights, mode))
    return bool(lhs - rhs > t)


def critical_alpha(f: Any, G: Any, mode: ScalarMode = ScalarMode.FLOAT) -> Scalar:
    """α* = inf_x sup_λ (f_λ(x) - f(x)): o maior α que satisfaz a hipótese f + α <= sup_λ f_λ."""
    D = objective_shifted_family(as_vector(f, mode), _matrix(G, mode, "constraints"))
    return _plain(pure_value(D)[0], mode)


def konig_functional(f: Any, G: Any, alpha: Any = 0, tol: Any = None,
                     mode: ScalarMode = ScalarMode.FLOAT) -> Union[SimplexVector, ConvexityWitness]:
    """
    Procura Φ ∈ Δ_Λ com f(x) + α <= Φ((f_λ(x))_λ) em todo x amostrado.

    Args:
        f: valores de f nos pontos amostrados
        G: matriz L×n com G[λ][x] = f_λ(x)
        alpha: deslocamento α da forma deslocada do teorema
        tol: tolerância
        mode: modo escalar

    Returns:
        Φ (verificado por aritmética direta antes de retornar), ou a testemunha
        de que a família (f_λ - f) não é infsup-convexa

    Raises:
        PreconditionError: a hipótese f(x) + α <= sup_λ f_λ(x) falha (coluna indicada)
        NumericalFailureError: Φ não passa na verificação, ou indecisão na faixa de tolerância
    """
    G_m = _matrix(G, mode, "constraints")
    f_v = as_vector(f, mode)
    a = as_vector([alpha], mode)[0]
    t = _tol(tol, mode)
    D = objective_shifted_family(f_v, G_m, a)

    margin, column = pure_value(D)
    if margin < -t:
        logger.warning("hypothesis f + alpha <= sup f_lambda fails at column %d (margin %s)", column, margin)
        raise PreconditionError(
            f"hypothesis f(x) + alpha <= sup_lambda f_lambda(x) fails at column {column} (margin {_plain(margin, mode)})")

    report = minimax(D, mode, t)
    if report.v_mixed >= -t:
        phi = report.phi
        ok, residual, worst = verify_functional(f_v, G_m, a, phi.weights, t, mode)
        if not ok:
            raise NumericalFailureError(
                f"functional fails direct verification at column {worst} (residual {residual})")
        logger.info("Konig functional found, worst residual %s at column %d", residual, worst)
        return phi

    # same optimal mixture, reported against the unshifted family (f_λ - f)
    family = objective_shifted_family(f_v, G_m)
    return extract_witness(family, report, mode, t)


def mazur_orlicz_functional(points: Any, tol: Any = None,
                            mode: ScalarMode = ScalarMode.FLOAT) -> Tuple[SimplexVector, Scalar]:
    """
    Φ ∈ Δ_L com inf sobre conv(pontos) de Φᵀ· igual ao inf sobre conv(pontos)
    do máximo das coordenadas; ambos iguais ao valor devolvido.

    Os pontos são as colunas do jogo: points[k] é um vetor de ℝ^L.
    """
    P = _matrix(points, mode, "points")
    M = P.T
    t = _tol(tol, mode)
    report = minimax(M, mode, t)
    phi_arr = as_vector(report.phi.weights, mode)
    attained = np.min(phi_arr @ M)
    scale = scaled_tolerance(t, M, mode)
    if abs(attained - report.v_mixed) > scale:
        raise NumericalFailureError(
            f"functional infimum {attained} differs from the sublinear infimum {report.v_mixed}")
    return report.phi, report.v_mixed
