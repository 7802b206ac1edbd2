import sys
import os

sys.path.append(os.path.dirname(os.path.dirname(__file__)))

import itertools
from fractions import Fraction

import numpy as np
import pytest

from infsup.config.solver_settings import solver_settings
from infsup.exceptions import InstanceError, NumericalFailureError
from infsup.lp_core import minimax, minimax_problem, pure_value, solve, verify_farkas
from infsup.models import LowerBound, LpProblem, LpStatus, Relation, ScalarMode
from infsup.utils.scalars import as_matrix

EXACT = ScalarMode.EXACT
FLOAT = ScalarMode.FLOAT
MODES = [FLOAT, EXACT]


def closed_form_value(a, b, c, d):
    """Valor do jogo 2x2 [[a, b], [c, d]] pela fórmula clássica."""
    lower = max(min(a, b), min(c, d))
    upper = min(max(a, c), max(b, d))
    if lower == upper:
        return Fraction(lower)
    return Fraction(a * d - b * c, a + d - b - c)


@pytest.mark.parametrize("entries", list(itertools.product([-1, 0, 1], repeat=4)))
def test_minimax_matches_two_by_two_formula(entries):
    a, b, c, d = entries
    expected = closed_form_value(a, b, c, d)

    exact = minimax([[a, b], [c, d]], EXACT, 0)
    assert exact.v_mixed == expected

    approx = minimax([[a, b], [c, d]], FLOAT)
    assert abs(approx.v_mixed - float(expected)) <= 1e-9


def test_weak_duality_on_random_matrices():
    rng = np.random.default_rng(2024)
    for _ in range(200):
        m = int(rng.integers(1, 7))
        n = int(rng.integers(1, 9))
        A = rng.uniform(-2.0, 2.0, size=(m, n))
        report = minimax(A, FLOAT)
        assert report.v_mixed <= report.v_pure + 1e-9
        assert abs(sum(report.mu.weights) - 1.0) <= 1e-12
        assert abs(sum(report.phi.weights) - 1.0) <= 1e-12


def test_matching_pennies_strategies():
    report = minimax([[1, -1], [-1, 1]], EXACT, 0)
    assert report.v_mixed == 0
    assert report.v_pure == 1
    assert report.mu.weights == [Fraction(1, 2), Fraction(1, 2)]
    assert report.phi.weights == [Fraction(1, 2), Fraction(1, 2)]
    assert not report.equal


def test_pure_value_breaks_ties_by_lowest_column():
    value, column = pure_value(as_matrix([[1, 0, 0], [-1, -2, 0]], EXACT))
    assert value == 0
    assert column == 1


def test_minimax_problem_layout():
    p = minimax_problem(as_matrix([[1, 2, 3], [4, 5, 6]], EXACT), EXACT)
    assert p.n_rows == 3 and p.n_vars == 4
    assert p.relations == [Relation.LE, Relation.LE, Relation.EQ]
    assert p.lower_bounds[-1] == LowerBound.FREE
    assert p.c == [0, 0, 0, 1]


@pytest.mark.parametrize("mode", MODES)
def test_solve_small_production_problem(mode):
    # max x1 + x2  s.t.  x1 + 2x2 <= 4,  3x1 + x2 <= 6
    p = LpProblem(c=[-1, -1], A=[[1, 2], [3, 1]], relations=[Relation.LE, Relation.LE], b=[4, 6],
                  scalar_mode=mode)
    outcome = solve(p, tol=0 if mode == EXACT else None)
    assert outcome.status == LpStatus.OPTIMAL
    if mode == EXACT:
        assert outcome.primal == [Fraction(8, 5), Fraction(6, 5)]
        assert outcome.objective_value == Fraction(-14, 5)
        assert sum(y * b for y, b in zip(outcome.dual, [4, 6])) == outcome.objective_value
        assert outcome.primal_residual == 0 and outcome.complementarity_residual == 0
    else:
        assert outcome.primal == pytest.approx([1.6, 1.2])
        assert outcome.objective_value == pytest.approx(-2.8)


@pytest.mark.parametrize("mode", MODES)
def test_solve_with_free_variable_and_negative_rhs(mode):
    # min v  s.t.  v >= -5, v free
    p = LpProblem(c=[1], A=[[1]], relations=[Relation.GE], b=[-5], lower_bounds=[LowerBound.FREE],
                  scalar_mode=mode)
    outcome = solve(p)
    assert outcome.status == LpStatus.OPTIMAL
    assert outcome.primal[0] == pytest.approx(-5)
    assert outcome.objective_value == pytest.approx(-5)


@pytest.mark.parametrize("mode", MODES)
def test_infeasible_problem_returns_farkas_vector(mode):
    p = LpProblem(c=[1, 1], A=[[1, 1], [1, 1]], relations=[Relation.LE, Relation.GE], b=[1, 3],
                  scalar_mode=mode)
    outcome = solve(p)
    assert outcome.status == LpStatus.INFEASIBLE
    assert outcome.primal is None
    assert verify_farkas(p, outcome.farkas)


def test_infeasible_equality_system_exact():
    p = LpProblem(c=[0, 0], A=[[1, -1], [1, -1]], relations=[Relation.EQ, Relation.EQ], b=[1, 2],
                  lower_bounds=[LowerBound.FREE, LowerBound.FREE], scalar_mode=EXACT)
    outcome = solve(p)
    assert outcome.status == LpStatus.INFEASIBLE
    assert verify_farkas(p, outcome.farkas)


def test_verify_farkas_rejects_wrong_vectors():
    p = LpProblem(c=[1, 1], A=[[1, 1], [1, 1]], relations=[Relation.LE, Relation.GE], b=[1, 3],
                  scalar_mode=EXACT)
    assert verify_farkas(p, [-1, 1])
    assert not verify_farkas(p, [1, -1])
    assert not verify_farkas(p, [0, 0])
    with pytest.raises(InstanceError):
        verify_farkas(p, [1])


@pytest.mark.parametrize("mode", MODES)
def test_unbounded_problem(mode):
    p = LpProblem(c=[-1, 0], A=[[1, -1]], relations=[Relation.LE], b=[1], scalar_mode=mode)
    assert solve(p).status == LpStatus.UNBOUNDED


def test_problem_dimension_mismatch_is_rejected():
    with pytest.raises(InstanceError):
        LpProblem(c=[1, 1], A=[[1, 1, 1]], relations=[Relation.LE], b=[1])


def test_iteration_cap_raises_in_float_mode(monkeypatch):
    monkeypatch.setattr(solver_settings, "MAX_ITERATIONS", 0)
    p = LpProblem(c=[-1, -1], A=[[1, 2], [3, 1]], relations=[Relation.LE, Relation.LE], b=[4, 6])
    with pytest.raises(NumericalFailureError):
        solve(p)


def test_minimax_rejects_empty_matrix():
    with pytest.raises(InstanceError):
        minimax([], FLOAT)


def test_minimax_is_equivariant_under_positive_affine_maps():
    rng = np.random.default_rng(31)
    for _ in range(40):
        m, n = int(rng.integers(1, 5)), int(rng.integers(1, 6))
        A = as_matrix(rng.integers(-4, 5, size=(m, n)).tolist(), EXACT)
        c = Fraction(int(rng.integers(1, 6)), int(rng.integers(1, 4)))
        d = Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))
        base = minimax(A, EXACT, 0)
        moved = minimax(A * c + d, EXACT, 0)
        assert moved.v_mixed == c * base.v_mixed + d
        assert moved.v_pure == c * base.v_pure + d
        # strategies of the original game stay optimal in the transformed one
        mu = np.array(base.mu.weights, dtype=object)
        phi = np.array(base.phi.weights, dtype=object)
        assert max((A * c + d) @ mu) == moved.v_mixed
        assert min(phi @ (A * c + d)) == moved.v_mixed
