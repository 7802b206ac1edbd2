"""
Motor de programação linear denso com certificados.

- solve: simplex em duas fases com a regra de Bland, em float64 ou em
  aritmética racional exata (numpy com dtype=object contendo Fraction);
  devolve solução primal e dual quando ótimo, vetor de Farkas quando inviável.
- minimax: valor puro e valor misto de um jogo matricial, com a estratégia
  mista μ das colunas e o funcional φ das linhas lido do dual.
- verify_farkas: confere um certificado de inviabilidade por multiplicação direta.

Convenção de sinais do dual (minimização): y_i >= 0 nas linhas ">=",
y_i <= 0 nas linhas "<=", livre nas linhas "=".
"""
import logging
from typing import Any, List, Optional, Sequence

import numpy as np

from infsup.config.solver_settings import solver_settings
from infsup.exceptions import InstanceError, NumericalFailureError
from infsup.models import (
    LowerBound, LpOutcome, LpProblem, LpStatus, MinimaxReport, Relation,
    ScalarMode, SimplexVector,
)
from infsup.utils.scalars import Scalar, as_matrix, as_vector, one, scaled_tolerance, tolerance, zero, zeros

logger = logging.getLogger(__name__)

_FLIP = {Relation.LE: Relation.GE, Relation.GE: Relation.LE, Relation.EQ: Relation.EQ}


class _Tableau:
    """
    Tableau denso B⁻¹[A' | S | I | b'] do problema padronizado A'z' (rel) b', b' >= 0.

    Columns are laid out as structural, then slack/surplus, then one artificial
    per row. The artificial block always holds B⁻¹, which is where the duals
    are read from.
    """

    def __init__(self, problem: LpProblem, eps: Scalar, max_iterations: Optional[int]):
        self.mode = problem.scalar_mode
        self.eps = eps
        self.max_iterations = max_iterations
        self.iterations = 0

        A = as_matrix(problem.A, self.mode) if problem.A else zeros((0, problem.n_vars), self.mode)
        b = as_vector(problem.b, self.mode)
        m = A.shape[0]
        self.m = m

        # free variables are split as z = z⁺ - z⁻
        self.var_columns = []
        columns = []
        for j, bound in enumerate(problem.lower_bounds):
            pos = len(columns)
            columns.append(A[:, j])
            neg = None
            if bound == LowerBound.FREE:
                neg = len(columns)
                columns.append(-A[:, j])
            self.var_columns.append((pos, neg))
        n_struct = len(columns)
        structural = np.column_stack(columns) if columns else zeros((m, 0), self.mode)

        self.signs = [1] * m
        relations = list(problem.relations)
        for i in range(m):
            if b[i] < 0:
                self.signs[i] = -1
                structural[i, :] = -structural[i, :]
                b[i] = -b[i]
                relations[i] = _FLIP[relations[i]]

        slack_rows = [i for i in range(m) if relations[i] != Relation.EQ]
        slack = zeros((m, len(slack_rows)), self.mode)
        for k, i in enumerate(slack_rows):
            slack[i, k] = one(self.mode) if relations[i] == Relation.LE else -one(self.mode)

        identity = zeros((m, m), self.mode)
        for i in range(m):
            identity[i, i] = one(self.mode)

        self.n_struct = n_struct
        self.n_slack = len(slack_rows)
        self.art_start = n_struct + self.n_slack
        self.n_cols = self.art_start + m

        body = np.hstack([structural, slack, identity, b.reshape(m, 1)])
        self.T = np.vstack([body, zeros((1, self.n_cols + 1), self.mode)])
        self.basis = list(range(self.art_start, self.n_cols))

        c = as_vector(problem.c, self.mode)
        self.cost = zeros(self.n_cols, self.mode)
        for j, (pos, neg) in enumerate(self.var_columns):
            self.cost[pos] = c[j]
            if neg is not None:
                self.cost[neg] = -c[j]

    # --- core operations ---
    def set_objective(self, costs: np.ndarray) -> None:
        """Reduced costs r = c - c_B B⁻¹A' on the last row, -c_B B⁻¹b' in the corner."""
        c_B = np.array([costs[k] for k in self.basis], dtype=self.T.dtype)
        body = self.T[:self.m, :]
        row = np.append(costs, zero(self.mode)) - (c_B @ body if self.m else 0)
        self.T[self.m, :] = row

    def pivot(self, r: int, c: int) -> None:
        T = self.T
        T[r, :] = T[r, :] / T[r, c]
        for i in range(T.shape[0]):
            if i != r and T[i, c] != 0:
                T[i, :] = T[i, :] - T[i, c] * T[r, :]
        if self.mode == ScalarMode.FLOAT:
            T[np.abs(T) < self.eps] = 0.0
        self.basis[r] = c

    def _entering(self, allowed: int) -> Optional[int]:
        row = self.T[self.m, :allowed]
        for j in range(allowed):
            if row[j] < -self.eps:
                return j
        return None

    def _leaving(self, c: int) -> Optional[int]:
        best, best_ratio = None, None
        for i in range(self.m):
            a = self.T[i, c]
            if a > self.eps:
                ratio = self.T[i, -1] / a
                if best is None or ratio < best_ratio - self.eps or (
                        ratio <= best_ratio + self.eps and self.basis[i] < self.basis[best]):
                    best, best_ratio = i, ratio
        return best

    def iterate(self, allowed: int) -> LpStatus:
        """Bland's rule: lowest-index improving column, ties in the ratio test by lowest basic index."""
        while True:
            c = self._entering(allowed)
            if c is None:
                return LpStatus.OPTIMAL
            r = self._leaving(c)
            if r is None:
                return LpStatus.UNBOUNDED
            self.pivot(r, c)
            self.iterations += 1
            if self.max_iterations is not None and self.iterations > self.max_iterations:
                raise NumericalFailureError(
                    f"simplex exceeded {self.max_iterations} iterations (float mode)")

    def drive_out_artificials(self) -> None:
        for r in range(self.m):
            if self.basis[r] < self.art_start:
                continue
            for c in range(self.art_start):
                if abs(self.T[r, c]) > self.eps:
                    self.pivot(r, c)
                    break
            # otherwise the row is redundant and its artificial stays basic at zero

    def duals(self, costs: np.ndarray) -> List[Scalar]:
        """y = c_B B⁻¹ mapped back to the original row signs."""
        c_B = np.array([costs[k] for k in self.basis], dtype=self.T.dtype)
        B_inv = self.T[:self.m, self.art_start:self.n_cols]
        y = c_B @ B_inv if self.m else np.array([], dtype=self.T.dtype)
        return [y[i] * self.signs[i] for i in range(self.m)]

    def primal(self) -> List[Scalar]:
        values = zeros(self.n_cols, self.mode)
        for i, k in enumerate(self.basis):
            values[k] = self.T[i, -1]
        out = []
        for pos, neg in self.var_columns:
            out.append(values[pos] - values[neg] if neg is not None else values[pos])
        return out


def _row_activity(problem: LpProblem, z: Sequence[Scalar]) -> np.ndarray:
    A = as_matrix(problem.A, problem.scalar_mode)
    return A @ np.array(z, dtype=A.dtype)


def _residuals(problem: LpProblem, z: List[Scalar], y: List[Scalar]):
    mode = problem.scalar_mode
    b = as_vector(problem.b, mode)
    activity = _row_activity(problem, z) if problem.A else b
    primal = zero(mode)
    comp = zero(mode)
    for i, rel in enumerate(problem.relations):
        slack = activity[i] - b[i]
        if rel == Relation.LE:
            primal = max(primal, slack)
        elif rel == Relation.GE:
            primal = max(primal, -slack)
        else:
            primal = max(primal, abs(slack))
        comp = max(comp, abs(y[i] * slack))
    c = as_vector(problem.c, mode)
    A = as_matrix(problem.A, mode) if problem.A else zeros((0, problem.n_vars), mode)
    reduced = c - np.array(y, dtype=A.dtype) @ A if problem.A else c
    for j, bound in enumerate(problem.lower_bounds):
        if bound == LowerBound.ZERO:
            primal = max(primal, -z[j])
        comp = max(comp, abs(z[j] * reduced[j]))
    return primal, comp


def _scale(problem: LpProblem) -> float:
    entries = [abs(float(v)) for row in problem.A for v in row] + [abs(float(v)) for v in problem.b]
    return max(entries, default=0.0)


def solve(p: LpProblem, mode: Optional[ScalarMode] = None, tol: Any = None) -> LpOutcome:
    """
    Resolve min cᵀz sujeito às linhas de p pelo simplex em duas fases.

    Args:
        p: problema linear
        mode: modo escalar; por padrão o do próprio problema
        tol: tolerância de viabilidade/otimalidade (padrão solver_settings.DEFAULT_TOLERANCE)

    Returns:
        LpOutcome com o certificado correspondente ao status

    Raises:
        NumericalFailureError: limite de iterações (apenas float) ou resíduos acima da tolerância
    """
    if mode is not None and mode != p.scalar_mode:
        p = LpProblem(**{**p.model_dump(), "scalar_mode": mode})
    mode = p.scalar_mode
    tol = tolerance(solver_settings.DEFAULT_TOLERANCE if tol is None else tol, mode)
    exact = mode == ScalarMode.EXACT
    eps = zero(mode) if exact else solver_settings.PIVOT_TOLERANCE
    tableau = _Tableau(p, eps, None if exact else solver_settings.MAX_ITERATIONS)

    # phase 1: minimize the sum of artificials
    phase1 = zeros(tableau.n_cols, mode)
    for k in range(tableau.art_start, tableau.n_cols):
        phase1[k] = one(mode)
    tableau.set_objective(phase1)
    tableau.iterate(tableau.n_cols)
    infeasibility = -tableau.T[tableau.m, -1]
    logger.debug("phase 1 finished after %d pivots, infeasibility %s", tableau.iterations, infeasibility)

    # exact mode only accepts a phase-1 optimum of exactly zero
    if infeasibility > (zero(mode) if exact else tol):
        farkas = tableau.duals(phase1)
        logger.debug("problem infeasible, Farkas vector %s", farkas)
        return LpOutcome(status=LpStatus.INFEASIBLE, farkas=farkas, iterations=tableau.iterations)

    # phase 2 on the original costs; artificial columns never re-enter
    tableau.drive_out_artificials()
    tableau.set_objective(tableau.cost)
    status = tableau.iterate(tableau.art_start)
    logger.debug("phase 2 finished with status %s after %d pivots", status.value, tableau.iterations)
    if status == LpStatus.UNBOUNDED:
        return LpOutcome(status=LpStatus.UNBOUNDED, iterations=tableau.iterations)

    z = tableau.primal()
    y = tableau.duals(tableau.cost)
    c = as_vector(p.c, mode)
    value = c @ np.array(z, dtype=c.dtype)
    primal_res, comp_res = _residuals(p, z, y)
    bound = tol if exact else tol * (1.0 + _scale(p))
    if primal_res > bound or comp_res > bound:
        raise NumericalFailureError(
            f"optimal basis fails verification: primal residual {primal_res}, "
            f"complementarity residual {comp_res}")
    if not exact:
        z = [float(v) for v in z]
        y = [float(v) for v in y]
        value = float(value)
        primal_res, comp_res = float(primal_res), float(comp_res)
    return LpOutcome(
        status=LpStatus.OPTIMAL, primal=z, dual=y, objective_value=value,
        primal_residual=primal_res, complementarity_residual=comp_res,
        iterations=tableau.iterations,
    )


def verify_farkas(p: LpProblem, y: Sequence[Any], tol: Any = None) -> bool:
    """
    True iff y proves p infeasible: sign conditions per relation, (yᵀA)_j <= 0 on
    nonnegative variables, = 0 on free ones, and yᵀb > 0. Exact in rational mode;
    float mode allows tol on the sign conditions and demands yᵀb > tol.
    """
    mode = p.scalar_mode
    if len(y) != p.n_rows:
        raise InstanceError(f"Farkas vector has {len(y)} entries, expected {p.n_rows}", "farkas")
    if mode == ScalarMode.EXACT:
        t = zero(mode)
    else:
        t = tolerance(solver_settings.DEFAULT_TOLERANCE if tol is None else tol, mode)
    yv = as_vector(y, mode)
    for i, rel in enumerate(p.relations):
        if rel == Relation.LE and yv[i] > t:
            return False
        if rel == Relation.GE and yv[i] < -t:
            return False
    A = as_matrix(p.A, mode) if p.A else zeros((0, p.n_vars), mode)
    combo = yv @ A if p.A else zeros(p.n_vars, mode)
    for j, bound in enumerate(p.lower_bounds):
        if combo[j] > t:
            return False
        if bound == LowerBound.FREE and combo[j] < -t:
            return False
    return bool(yv @ as_vector(p.b, mode) > t) if p.A else False


def pure_value(A: np.ndarray):
    """min over columns of max over rows, with the lowest attaining column."""
    maxima = np.max(A, axis=0)
    best = 0
    for j in range(1, maxima.shape[0]):
        if maxima[j] < maxima[best]:
            best = j
    return maxima[best], best


def minimax_problem(A: np.ndarray, mode: ScalarMode) -> LpProblem:
    """min v  s.t.  (Aμ)_λ <= v for every row λ,  Σμ = 1,  μ >= 0,  v livre."""
    m, n = A.shape
    rows = [list(A[i, :]) + [-1] for i in range(m)]
    rows.append([1] * n + [0])
    return LpProblem(
        c=[0] * n + [1],
        A=rows,
        relations=[Relation.LE] * m + [Relation.EQ],
        b=[0] * m + [1],
        lower_bounds=[LowerBound.ZERO] * n + [LowerBound.FREE],
        scalar_mode=mode,
    )


def minimax(A: Any, mode: ScalarMode = ScalarMode.FLOAT, tol: Any = None) -> MinimaxReport:
    """
    Valor do jogo em que as colunas escolhem uma mistura μ ∈ Δ_n e as linhas
    maximizam: v_mixed = min_μ max_λ (Aμ)_λ. O dual das linhas é φ ∈ Δ_m com
    min_j (φᵀA)_j = v_mixed.

    Raises:
        InstanceError: matriz vazia ou com entradas não finitas
        NumericalFailureError: falha do solver ou violação de dualidade forte
    """
    try:
        M = as_matrix(A.tolist() if isinstance(A, np.ndarray) else A, mode)
    except ValueError as e:
        raise InstanceError(str(e), "matrix")
    t = tolerance(solver_settings.DEFAULT_TOLERANCE if tol is None else tol, mode)
    m, n = M.shape

    outcome = solve(minimax_problem(M, mode), tol=t)
    if outcome.status != LpStatus.OPTIMAL:
        raise NumericalFailureError(f"minimax LP returned {outcome.status.value}")

    v_mixed = outcome.primal[n]
    try:
        mu = SimplexVector.project(outcome.primal[:n], mode)
        phi = SimplexVector.project([-y for y in outcome.dual[:m]], mode)
    except ValueError as e:
        raise NumericalFailureError(f"minimax strategies are not in the simplex: {e}")

    mu_arr = as_vector(mu.weights, mode)
    phi_arr = as_vector(phi.weights, mode)
    row_best = np.max(M @ mu_arr)
    col_best = np.min(phi_arr @ M)
    slack = scaled_tolerance(t, M, mode)
    if abs(row_best - v_mixed) > slack or abs(col_best - v_mixed) > slack:
        raise NumericalFailureError(
            f"strong duality check failed: max(Aμ)={row_best}, min(φᵀA)={col_best}, v={v_mixed}")

    v_pure, column = pure_value(M)
    if mode != ScalarMode.EXACT:
        v_pure, v_mixed = float(v_pure), float(v_mixed)
    logger.debug("minimax %dx%d: v_pure=%s v_mixed=%s", m, n, v_pure, v_mixed)
    return MinimaxReport(
        v_pure=v_pure, v_pure_column=column, v_mixed=v_mixed,
        mu=mu, phi=phi, equal=bool(v_mixed >= v_pure - t),
    )
