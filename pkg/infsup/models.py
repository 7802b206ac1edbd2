"""
Modelos Pydantic do infsup.

Este arquivo contém os modelos de dados compartilhados pelos módulos de cálculo
(instâncias discretizadas, problemas de programação linear, certificados,
testemunhas) e pelo relatório JSON emitido pela CLI.

Escalares são float (modo float64) ou fractions.Fraction (modo exact-rational);
por isso os campos numéricos são tipados como Any e validados à mão.
"""
from enum import Enum
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from infsup.exceptions import InstanceError

Scalar = Any


# Enums
class ScalarMode(str, Enum):
    FLOAT = "float64"
    EXACT = "exact-rational"


class Relation(str, Enum):
    LE = "<="
    EQ = "="
    GE = ">="


class LowerBound(str, Enum):
    ZERO = "0"
    FREE = "-inf"


class LpStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class VerdictKind(str, Enum):
    CONVEX_ON_SAMPLE = "convex_on_sample"
    WITNESS = "witness"


class CertificateKind(str, Enum):
    FRITZ_JOHN = "fritz_john"
    KKT = "kkt"


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


def _convert_vector(values: Any, mode: ScalarMode, path: str) -> List[Scalar]:
    from infsup.utils.scalars import to_scalar

    if not isinstance(values, (list, tuple)):
        raise InstanceError("expected a list of numbers", path)
    out = []
    for j, v in enumerate(values):
        try:
            out.append(to_scalar(v, mode))
        except ValueError as e:
            raise InstanceError(str(e), f"{path}[{j}]")
    return out


# Instância discretizada
class ProgramInstance(_Frozen):
    """
    Programa (semi-)infinito amostrado: f sobre uma amostra finita de X e a
    família de restrições f_λ sobre um conjunto de índices Λ finito (truncado).

    constraints[λ][j] = f_λ(x_j); objective[j] = f(x_j).
    """
    lambda_labels: List[str]
    x_labels: List[str]
    objective: List[Scalar]
    constraints: List[List[Scalar]]
    x0_index: Optional[int] = None
    scalar_mode: ScalarMode = ScalarMode.FLOAT

    @model_validator(mode="before")
    @classmethod
    def _validate_entries(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            raise InstanceError("instance must be a JSON object")
        data = dict(data)
        mode = ScalarMode(data.get("scalar_mode", ScalarMode.FLOAT))
        data["scalar_mode"] = mode

        if "objective" not in data:
            raise InstanceError("missing field", "objective")
        if "constraints" not in data:
            raise InstanceError("missing field", "constraints")
        objective = _convert_vector(data["objective"], mode, "objective")
        n = len(objective)
        if n < 1:
            raise InstanceError("at least one sampled point is required", "objective")

        rows = data["constraints"]
        if not isinstance(rows, (list, tuple)) or len(rows) < 1:
            raise InstanceError("expected a nonempty list of rows", "constraints")
        constraints = []
        for i, row in enumerate(rows):
            converted = _convert_vector(row, mode, f"constraints[{i}]")
            if len(converted) != n:
                raise InstanceError(
                    f"row length mismatch: {len(converted)} entries, expected {n}",
                    f"constraints[{i}]",
                )
            constraints.append(converted)
        data["objective"] = objective
        data["constraints"] = constraints

        lambda_labels = data.get("lambda_labels")
        if lambda_labels is None:
            lambda_labels = [f"g{i + 1}" for i in range(len(constraints))]
        x_labels = data.get("x_labels")
        if x_labels is None:
            x_labels = [f"x{j + 1}" for j in range(n)]
        if not isinstance(lambda_labels, (list, tuple)) or len(lambda_labels) != len(constraints):
            raise InstanceError(f"expected {len(constraints)} labels", "lambda_labels")
        if not isinstance(x_labels, (list, tuple)) or len(x_labels) != n:
            raise InstanceError(f"expected {n} labels", "x_labels")
        data["lambda_labels"] = [str(s) for s in lambda_labels]
        data["x_labels"] = [str(s) for s in x_labels]

        x0 = data.get("x0_index")
        if x0 is not None:
            if isinstance(x0, bool) or not isinstance(x0, int):
                raise InstanceError("expected an integer", "x0_index")
            if not 0 <= x0 < n:
                raise InstanceError(f"index {x0} out of range 0..{n - 1}", "x0_index")
        return data

    @property
    def n(self) -> int:
        return len(self.objective)

    @property
    def L(self) -> int:
        return len(self.constraints)

    def objective_vector(self):
        from infsup.utils.scalars import as_vector
        return as_vector(self.objective, self.scalar_mode)

    def constraint_matrix(self):
        from infsup.utils.scalars import as_matrix
        return as_matrix(self.constraints, self.scalar_mode)


class SimplexVector(_Frozen):
    """Elemento de Δ_N: pesos não negativos que somam 1."""
    weights: List[Scalar]
    scalar_mode: ScalarMode = ScalarMode.FLOAT

    @model_validator(mode="after")
    def _check_simplex(self) -> "SimplexVector":
        from infsup.utils.scalars import exact_sum

        if not self.weights:
            raise ValueError("simplex vector must be nonempty")
        if any(w < 0 for w in self.weights):
            raise ValueError("simplex weights must be nonnegative")
        total = exact_sum(self.weights, self.scalar_mode)
        if self.scalar_mode == ScalarMode.EXACT:
            if total != 1:
                raise ValueError(f"simplex weights sum to {total}, expected exactly 1")
        elif abs(total - 1.0) > 1e-12:
            raise ValueError(f"simplex weights sum to {total!r}, expected 1")
        return self

    @classmethod
    def project(cls, values, mode: ScalarMode, clip: float = 1e-9) -> "SimplexVector":
        """
        Builds a simplex vector from solver output. Float mode clips entries in
        [-clip, 0) to zero and renormalizes; exact mode takes the values as they are.
        """
        from infsup.utils.scalars import exact_sum, to_scalar

        items = [to_scalar(v, mode) for v in values]
        if mode == ScalarMode.EXACT:
            return cls(weights=items, scalar_mode=mode)
        if any(v < -clip for v in items):
            raise ValueError(f"weight below zero beyond {clip}: {min(items)!r}")
        items = [max(v, 0.0) for v in items]
        total = exact_sum(items, mode)
        return cls(weights=[v / total for v in items], scalar_mode=mode)

    @property
    def dimension(self) -> int:
        return len(self.weights)


# Programação linear
class LpProblem(_Frozen):
    """min cᵀz  s.t.  A z (rel) b, z_j >= 0 ou livre."""
    c: List[Scalar]
    A: List[List[Scalar]]
    relations: List[Relation]
    b: List[Scalar]
    lower_bounds: List[LowerBound]
    scalar_mode: ScalarMode = ScalarMode.FLOAT

    @model_validator(mode="before")
    @classmethod
    def _validate_dimensions(cls, data: Any) -> Any:
        data = dict(data)
        mode = ScalarMode(data.get("scalar_mode", ScalarMode.FLOAT))
        data["scalar_mode"] = mode
        c = _convert_vector(data.get("c", []), mode, "c")
        rows = data.get("A", [])
        A = [_convert_vector(row, mode, f"A[{i}]") for i, row in enumerate(rows)]
        b = _convert_vector(data.get("b", []), mode, "b")
        d = len(c)
        if d < 1:
            raise InstanceError("at least one variable is required", "c")
        for i, row in enumerate(A):
            if len(row) != d:
                raise InstanceError(f"row length {len(row)}, expected {d}", f"A[{i}]")
        if len(b) != len(A):
            raise InstanceError(f"expected {len(A)} right-hand sides", "b")
        if len(data.get("relations", [])) != len(A):
            raise InstanceError(f"expected {len(A)} relations", "relations")
        bounds = data.get("lower_bounds")
        if bounds is None:
            bounds = [LowerBound.ZERO] * d
        if len(bounds) != d:
            raise InstanceError(f"expected {d} lower bounds", "lower_bounds")
        data.update(c=c, A=A, b=b, lower_bounds=bounds)
        return data

    @property
    def n_rows(self) -> int:
        return len(self.A)

    @property
    def n_vars(self) -> int:
        return len(self.c)


class LpOutcome(_Frozen):
    status: LpStatus
    primal: Optional[List[Scalar]] = None
    dual: Optional[List[Scalar]] = None
    farkas: Optional[List[Scalar]] = None
    objective_value: Optional[Scalar] = None
    primal_residual: Optional[Scalar] = None
    complementarity_residual: Optional[Scalar] = None
    iterations: int = 0


class MinimaxReport(_Frozen):
    """Valores puro e misto do jogo matricial (linhas maximizam, colunas minimizam)."""
    v_pure: Scalar
    v_pure_column: int
    v_mixed: Scalar
    mu: SimplexVector
    phi: SimplexVector
    equal: bool


# Infsup-convexidade
class ConvexityWitness(_Frozen):
    """Combinação convexa finita de pontos amostrados que viola a infsup-convexidade."""
    support: List[int]
    weights: SimplexVector
    lhs: Scalar
    rhs: Scalar
    gap: Scalar


class ConvexityVerdict(_Frozen):
    kind: VerdictKind
    witness: Optional[ConvexityWitness] = None
    v_pure: Scalar
    v_mixed: Scalar


# Multiplicadores
class MultiplierCertificate(_Frozen):
    """Par (ρ, φ) normalizado com ρ + Σφ = 1 e os resíduos das condições de Fritz John."""
    rho: Scalar
    phi: List[Scalar]
    normalized: bool = True
    kind: CertificateKind
    lagrangian_min_residual: Scalar
    complementarity_residual: Scalar
    kkt_multiplier: Optional[List[Scalar]] = None


class SlaterReport(_Frozen):
    strong_holds: bool
    strong_witness_index: Optional[int] = None
    strong_margin: Scalar
    weak_holds: bool
    weak_witness_index: Optional[int] = None
    weak_columns: List[int] = Field(default_factory=list)


class SaddleReport(_Frozen):
    left_ok: bool
    right_ok: bool
    worst_violation: Scalar
    violating_index: Optional[int] = None

    @property
    def is_saddle(self) -> bool:
        return self.left_ok and self.right_ok


class StudyEntry(_Frozen):
    n: int
    slater: SlaterReport
    v_pure: Scalar
    v_mixed: Scalar
    verdict: VerdictKind
    witness: Optional[ConvexityWitness] = None
    gap: Optional[Scalar] = None


class StudyReport(_Frozen):
    entries: List[StudyEntry]
    all_negative: bool
    nondecreasing: bool
    limit_note: str


# Relatório da CLI
class Report(BaseModel):
    command: str
    verdict: Literal["certificate", "witness", "convex", "holds", "fails", "value"]
    payload: Dict[str, Any]
    tolerance: Any
    scalar_mode: ScalarMode
    sample_restricted: bool = True
