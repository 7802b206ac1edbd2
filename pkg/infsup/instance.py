"""
Modelo de dados dos programas infinitos discretizados.

Este módulo contém:
- Leitura e escrita de instâncias (JSON)
- Geradores: a família -x³/n do contra-exemplo e o programa convexo de demonstração
- A família combinada (f_λ) ∪ (f - f(x⁰)) usada pelos teoremas de multiplicadores
- Conjunto viável amostrado e teste de otimalidade de x⁰

Todos os veredictos são restritos à amostra: X e Λ são os conjuntos finitos
fornecidos pelo usuário.
"""
import json
import logging
from fractions import Fraction
from typing import Any, List, Sequence

import numpy as np

from infsup.exceptions import InstanceError, PreconditionError
from infsup.models import ProgramInstance, ScalarMode
from infsup.utils.scalars import Scalar, format_scalar, to_scalar, tolerance

logger = logging.getLogger(__name__)


def parse_instance(text: str, mode: ScalarMode = ScalarMode.FLOAT) -> ProgramInstance:
    """
    Lê uma instância a partir de um documento JSON.

    Em modo racional os literais decimais são lidos diretamente como frações
    (0.5 -> 1/2), sem passar por float.

    Raises:
        InstanceError: JSON malformado, dimensões inconsistentes, entrada não
            finita ou x0_index fora do intervalo (com o caminho do campo)
    """
    def _reject_constant(name: str):
        raise InstanceError(f"non-finite literal {name}")

    try:
        if mode == ScalarMode.EXACT:
            data = json.loads(text, parse_float=Fraction, parse_constant=_reject_constant)
        else:
            data = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as e:
        raise InstanceError(f"malformed JSON: {e.msg} (line {e.lineno}, column {e.colno})")

    if not isinstance(data, dict):
        raise InstanceError("instance must be a JSON object")
    # JSON integers stay int in both modes; decimal literals are never indices
    if isinstance(data.get("x0_index"), Fraction):
        raise InstanceError("expected an integer", "x0_index")
    data["scalar_mode"] = mode
    return ProgramInstance(**data)


def serialize_instance(inst: ProgramInstance) -> str:
    """Inverse of parse_instance; exact mode writes numbers as exact strings."""
    mode = inst.scalar_mode
    document = {
        "lambda_labels": list(inst.lambda_labels),
        "x_labels": list(inst.x_labels),
        "objective": [format_scalar(v, mode) for v in inst.objective],
        "constraints": [[format_scalar(v, mode) for v in row] for row in inst.constraints],
    }
    if inst.x0_index is not None:
        document["x0_index"] = inst.x0_index
    return json.dumps(document, indent=2)


def _grid_label(value: Scalar, mode: ScalarMode) -> str:
    return f"x={format_scalar(value, mode)}"


def _index_of(grid: Sequence[Scalar], target: int, what: str) -> int:
    for j, v in enumerate(grid):
        if v == target:
            return j
    raise PreconditionError(f"grid must contain {what}")


def generate_paper_example(N: int, grid: Sequence[Any],
                           mode: ScalarMode = ScalarMode.FLOAT) -> ProgramInstance:
    """
    Truncamento a N restrições do contra-exemplo f(x) = x, f_n(x) = -x³/n,
    cujo ótimo é x⁰ = 0.

    Raises:
        PreconditionError: N < 1, grade vazia ou sem o ponto 0
    """
    if isinstance(N, bool) or not isinstance(N, int) or N < 1:
        raise PreconditionError(f"N must be a positive integer, got {N!r}")
    if not grid:
        raise PreconditionError("grid must be nonempty")
    points = [to_scalar(v, mode) for v in grid]
    x0 = _index_of(points, 0, "0 (the optimal solution x0)")

    constraints = []
    for n in range(1, N + 1):
        if mode == ScalarMode.EXACT:
            constraints.append([-(x ** 3) / Fraction(n) for x in points])
        else:
            constraints.append([0.0 - x ** 3 / n for x in points])
    return ProgramInstance(
        lambda_labels=[f"n={n}" for n in range(1, N + 1)],
        x_labels=[_grid_label(x, mode) for x in points],
        objective=points,
        constraints=constraints,
        x0_index=x0,
        scalar_mode=mode,
    )


def generate_convex_demo(grid: Sequence[Any], mode: ScalarMode = ScalarMode.FLOAT) -> ProgramInstance:
    """min x² s.t. x + 1 <= 0 on the given grid, with x⁰ = -1."""
    if not grid:
        raise PreconditionError("grid must be nonempty")
    points = [to_scalar(v, mode) for v in grid]
    x0 = _index_of(points, -1, "-1 (the optimal solution x0)")
    return ProgramInstance(
        lambda_labels=["x+1"],
        x_labels=[_grid_label(x, mode) for x in points],
        objective=[x * x for x in points],
        constraints=[[x + 1 for x in points]],
        x0_index=x0,
        scalar_mode=mode,
    )


def _require_x0(inst: ProgramInstance) -> int:
    if inst.x0_index is None:
        raise InstanceError("x0_index is required for this operation", "x0_index")
    return inst.x0_index


def combined_family(inst: ProgramInstance) -> np.ndarray:
    """
    Family (f_λ)_λ ∪ (f - f(x⁰)) as an (L+1)×n matrix.

    Rows 0..L-1 copy the constraints; the objective row comes last, so every
    simplex vector over Λ₀ = Λ ∪ {μ} is ordered (φ_1..φ_L, ρ).
    """
    x0 = _require_x0(inst)
    G = inst.constraint_matrix()
    f = inst.objective_vector()
    return np.vstack([G, (f - f[x0])[np.newaxis, :]])


def objective_shifted_family(f: np.ndarray, G: np.ndarray, alpha: Scalar = 0) -> np.ndarray:
    """D[λ][x] = G[λ][x] - f(x) - α."""
    if G.shape[1] != f.shape[0]:
        raise InstanceError(f"objective has {f.shape[0]} entries, constraints have {G.shape[1]} columns")
    return G - f[np.newaxis, :] - alpha


def column_maxima(G: np.ndarray) -> np.ndarray:
    return np.max(G, axis=0)


def feasible_indices(inst: ProgramInstance, tol: Any = 0) -> List[int]:
    """{ j : max_λ constraints[λ][j] <= tol }"""
    mode = inst.scalar_mode
    t = tolerance(tol, mode)
    maxima = column_maxima(inst.constraint_matrix())
    return [j for j in range(inst.n) if maxima[j] <= t]


def assert_optimal(inst: ProgramInstance, tol: Any = 0) -> Scalar:
    """
    Gap de otimalidade f(x⁰) - min_{x viável na amostra} f(x).

    Raises:
        InstanceError: x0_index ausente
        PreconditionError: x⁰ inviável na tolerância, ou conjunto viável vazio
    """
    x0 = _require_x0(inst)
    feasible = feasible_indices(inst, tol)
    if not feasible:
        raise PreconditionError("feasible set X0 is empty on the sample")
    if x0 not in feasible:
        raise PreconditionError(f"x0 ({inst.x_labels[x0]}) is infeasible at tol={tol}")
    f = inst.objective_vector()
    best = min(f[j] for j in feasible)
    gap = f[x0] - best
    logger.debug("optimality gap of %s: %s", inst.x_labels[x0], gap)
    return gap if inst.scalar_mode == ScalarMode.EXACT else float(gap)


def load_instance(path: str, mode: ScalarMode = ScalarMode.FLOAT) -> ProgramInstance:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InstanceError(f"cannot read instance file: {e.strerror}", path)
    except UnicodeDecodeError as e:
        raise InstanceError(f"instance file is not UTF-8 text: {e.reason}", path)
    return parse_instance(text, mode)



def as_mode(inst: ProgramInstance, mode) -> ProgramInstance:
    """Same instance in another scalar mode (floats become their shortest decimal ratio)."""
    if mode is None or mode == inst.scalar_mode:
        return inst
    return ProgramInstance(**{**inst.model_dump(), "scalar_mode": mode})
