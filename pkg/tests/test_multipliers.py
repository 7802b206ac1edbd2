import sys
import os

sys.path.append(os.path.dirname(os.path.dirname(__file__)))

import itertools
from fractions import Fraction

import numpy as np
import pytest

from infsup.exceptions import InstanceError, PreconditionError
from infsup.instance import assert_optimal, combined_family, generate_convex_demo, generate_paper_example
from infsup.konig import check_infsup_convexity, verify_witness
from infsup.lp_core import minimax
from infsup.models import (
    CertificateKind, ConvexityWitness, MultiplierCertificate, ProgramInstance, ScalarMode, VerdictKind,
)
from infsup.multipliers import (
    certificate_from_multiplier, check_saddle, fritz_john, kkt, lagrangian_value, lemma_value,
    normalize_multiplier, slater_check, truncation_study, verify_certificate,
)

EXACT = ScalarMode.EXACT
FLOAT = ScalarMode.FLOAT
CONVEX_GRID = [-3 + 0.25 * k for k in range(17)]
PAPER_GRID = [-2, -1, -0.5, 0, 0.5, 1, 2, 10]
TRUNCATIONS = [1, 2, 4, 8]


@pytest.mark.parametrize("mode", [FLOAT, EXACT])
def test_kkt_on_convex_demo(mode):
    inst = generate_convex_demo(CONVEX_GRID, mode)
    cert = kkt(inst)
    assert isinstance(cert, MultiplierCertificate)
    assert cert.kind == CertificateKind.KKT
    assert cert.rho > 0
    # any multiplier in [1.75, 2.25] makes (x+1)(x-1) + m(x+1) nonnegative on this grid
    assert 1.75 - 1e-9 <= cert.kkt_multiplier[0] <= 2.25 + 1e-9
    assert check_saddle(inst, cert.kkt_multiplier).is_saddle
    assert check_saddle(inst, [2]).is_saddle


def test_fritz_john_on_convex_demo_is_normalized():
    inst = generate_convex_demo(CONVEX_GRID)
    cert = fritz_john(inst)
    assert cert.kind == CertificateKind.FRITZ_JOHN
    assert cert.rho + sum(cert.phi) == pytest.approx(1.0)
    assert cert.lagrangian_min_residual <= 1e-8
    assert cert.complementarity_residual <= 1e-8


@pytest.mark.parametrize("N", TRUNCATIONS)
def test_truncated_example_slater_margin(N):
    inst = generate_paper_example(N, PAPER_GRID)
    slater = slater_check(inst)
    assert slater.strong_holds
    assert slater.strong_margin == pytest.approx(-1000.0 / N, abs=1e-9)
    assert inst.x_labels[slater.strong_witness_index] == "x=10.0"
    assert slater.weak_holds
    assert slater.weak_columns == [4, 5, 6, 7]


def test_slater_ignores_columns_inside_the_tolerance():
    inst = ProgramInstance(objective=[0, 1], constraints=[[-1e-12, -2.0], [-5e-13, 3.0]])
    slater = slater_check(inst, 1e-9)
    assert not slater.strong_holds
    assert not slater.weak_holds
    assert slater.weak_columns == []
    assert slater.weak_witness_index is None
    assert slater.strong_margin == pytest.approx(-5e-13)

    loose = slater_check(inst, 0)
    assert loose.strong_holds and loose.weak_columns == [0]


@pytest.mark.parametrize("mode", [FLOAT, EXACT])
@pytest.mark.parametrize("N", TRUNCATIONS)
def test_truncated_example_has_no_multiplier(N, mode):
    inst = generate_paper_example(N, PAPER_GRID, mode)
    fj = fritz_john(inst)
    multiplier = kkt(inst)
    for witness in (fj, multiplier):
        assert isinstance(witness, ConvexityWitness)
        assert witness.gap > 0
        assert verify_witness(combined_family(inst), witness, None, mode)


def test_brute_force_scan_finds_no_fritz_john_pair():
    inst = generate_paper_example(1, PAPER_GRID)
    D0 = combined_family(inst)
    rho = np.arange(1001) / 1000.0
    phi = 1.0 - rho
    # row 0 is the constraint, row 1 is f - f(x0)
    weighted = phi[:, np.newaxis] * D0[0] + rho[:, np.newaxis] * D0[1]
    feasible = np.all(weighted >= -1e-12, axis=1)
    assert not feasible.any()
    assert minimax(D0).v_mixed < 0


def test_truncation_study_trend():
    study = truncation_study(TRUNCATIONS, PAPER_GRID)
    assert [e.n for e in study.entries] == TRUNCATIONS
    assert study.all_negative and study.nondecreasing
    values = [e.v_mixed for e in study.entries]
    assert all(v < 0 for v in values)
    assert values == sorted(values)
    for entry in study.entries:
        assert entry.verdict == VerdictKind.WITNESS
        assert entry.gap > 0
        assert entry.slater.weak_holds
    assert "analytically" in study.limit_note


def test_truncation_study_orders_and_deduplicates():
    study = truncation_study([4, 1, 4], PAPER_GRID, mode=EXACT)
    assert [e.n for e in study.entries] == [1, 4]


@pytest.mark.parametrize("N_list, grid", [
    ([], PAPER_GRID),
    ([0], PAPER_GRID),
    ([1], [0, 1, 2]),
    ([1], [-1, 0, 1]),
    ([1], [-5, 0, 2]),
    ([1], [-1, 1, 2]),
])
def test_truncation_study_preconditions(N_list, grid):
    with pytest.raises(PreconditionError):
        truncation_study(N_list, grid)


def test_lemma_value_is_zero_at_optimum():
    assert lemma_value(generate_convex_demo(CONVEX_GRID, EXACT)) == (0, 8)
    for N in TRUNCATIONS:
        value, column = lemma_value(generate_paper_example(N, PAPER_GRID, EXACT))
        assert value == 0 and column == 3


def test_lagrangian_value():
    inst = generate_paper_example(1, [-1, 0, 1], EXACT)
    assert lagrangian_value(inst, 2, [3]) == -2
    with pytest.raises(InstanceError):
        lagrangian_value(inst, 3, [3])
    with pytest.raises(InstanceError):
        lagrangian_value(inst, 0, [-1])


def test_saddle_fails_without_multiplier():
    inst = generate_convex_demo(CONVEX_GRID)
    saddle = check_saddle(inst, [0])
    assert saddle.left_ok
    assert not saddle.right_ok
    assert inst.x_labels[saddle.violating_index] == "x=0.0"
    assert saddle.worst_violation == pytest.approx(1.0)


def test_saddle_left_inequality_needs_complementarity():
    # x0 strictly feasible, so any positive multiplier breaks complementarity
    inst = ProgramInstance(objective=[0, 1], constraints=[[-1, -2]], x0_index=0)
    saddle = check_saddle(inst, [1])
    assert not saddle.left_ok


def test_normalize_and_certificate_from_multiplier():
    assert normalize_multiplier([2], EXACT) == (Fraction(1, 3), [Fraction(2, 3)])
    inst = generate_convex_demo(CONVEX_GRID, EXACT)
    cert = certificate_from_multiplier(inst, [2])
    assert cert.rho == Fraction(1, 3)
    assert cert.phi == [Fraction(2, 3)]
    assert cert.kkt_multiplier == [2]
    assert verify_certificate(inst, cert.rho, cert.phi) == (0, 0)
    with pytest.raises(PreconditionError):
        certificate_from_multiplier(inst, [0])


def test_fritz_john_without_slater_and_kkt_refusal():
    # x0 = 0 is optimal but the only feasible point sits on the boundary
    inst = ProgramInstance(objective=[0, -1], constraints=[[0, 1]], x0_index=0, scalar_mode=EXACT)
    assert not slater_check(inst).strong_holds
    assert isinstance(fritz_john(inst), MultiplierCertificate)
    with pytest.raises(PreconditionError):
        kkt(inst)


def test_fritz_john_prefers_positive_rho():
    # single point with an active constraint: both (0, 1) and (1, 0) satisfy the conditions
    inst = ProgramInstance(objective=[3], constraints=[[0]], x0_index=0, scalar_mode=EXACT)
    cert = fritz_john(inst)
    assert cert.rho == 1
    assert cert.phi == [0]
    assert (cert.lagrangian_min_residual, cert.complementarity_residual) == (0, 0)


def test_fritz_john_keeps_zero_rho_when_needed():
    # both cheaper points violate one constraint each, so only rho = 0 balances them
    inst = ProgramInstance(objective=[0, -1, -1], constraints=[[0, 1, -1], [0, -1, 1]],
                           x0_index=0, scalar_mode=EXACT)
    cert = fritz_john(inst)
    assert cert.rho == 0
    assert cert.phi == [Fraction(1, 2), Fraction(1, 2)]


def test_fritz_john_preconditions():
    with pytest.raises(InstanceError):
        fritz_john(ProgramInstance(objective=[1, 0], constraints=[[-1, -1]]))
    with pytest.raises(PreconditionError):
        fritz_john(ProgramInstance(objective=[1, 0], constraints=[[-1, -1]], x0_index=0))
    with pytest.raises(PreconditionError):
        fritz_john(ProgramInstance(objective=[1, 0], constraints=[[1, -1]], x0_index=0))


def _random_program(rng, mode):
    L = int(rng.integers(1, 4))
    n = int(rng.integers(2, 6))
    G = rng.integers(-3, 4, size=(L, n))
    G[:, 0] = -np.abs(G[:, 0])
    f = rng.integers(-3, 4, size=n)
    maxima = G.max(axis=0)
    feasible = [j for j in range(n) if maxima[j] <= 0]
    x0 = min(feasible, key=lambda j: (f[j], j))
    return ProgramInstance(objective=f.tolist(), constraints=G.tolist(), x0_index=int(x0), scalar_mode=mode)


def test_fritz_john_matches_infsup_convexity():
    rng = np.random.default_rng(17)
    for _ in range(100):
        inst = _random_program(rng, EXACT)
        result = fritz_john(inst, 0)
        verdict = check_infsup_convexity(combined_family(inst), 0, EXACT)
        if isinstance(result, MultiplierCertificate):
            assert verdict.kind == VerdictKind.CONVEX_ON_SAMPLE
            assert result.rho + sum(result.phi) == 1
            assert result.lagrangian_min_residual <= 0
            assert result.complementarity_residual == 0
        else:
            assert verdict.kind == VerdictKind.WITNESS
            assert verify_witness(combined_family(inst), result, 0, EXACT)


def test_float_and_exact_modes_agree():
    rng = np.random.default_rng(29)
    for _ in range(50):
        exact = _random_program(rng, EXACT)
        approx = exact.model_copy(update={
            "objective": [float(v) for v in exact.objective],
            "constraints": [[float(v) for v in row] for row in exact.constraints],
            "scalar_mode": FLOAT,
        })
        exact_verdict = check_infsup_convexity(combined_family(exact), 0, EXACT)
        float_verdict = check_infsup_convexity(combined_family(approx))
        assert exact_verdict.kind == float_verdict.kind
        assert abs(float(exact_verdict.v_mixed) - float_verdict.v_mixed) <= 1e-9
        assert type(fritz_john(exact, 0)) is type(fritz_john(approx))


def _random_slater_program(rng):
    L = int(rng.integers(1, 4))
    n = int(rng.integers(2, 6))
    G = rng.integers(-3, 4, size=(L, n))
    # column 0 is strictly feasible
    G[:, 0] = -np.abs(G[:, 0]) - 1
    f = rng.integers(-3, 4, size=n)
    maxima = G.max(axis=0)
    feasible = [j for j in range(n) if maxima[j] <= 0]
    x0 = min(feasible, key=lambda j: (f[j], j))
    return ProgramInstance(objective=f.tolist(), constraints=G.tolist(), x0_index=int(x0), scalar_mode=EXACT)


def test_slater_forces_positive_rho_and_kkt_gives_saddle():
    rng = np.random.default_rng(19)
    certificates = 0
    for _ in range(100):
        inst = _random_slater_program(rng)
        assert slater_check(inst, 0).strong_holds
        fj = fritz_john(inst, 0)
        result = kkt(inst, 0)
        assert type(fj) is type(result)
        if isinstance(result, ConvexityWitness):
            continue
        certificates += 1
        assert fj.rho > 0
        assert result.rho > 0
        assert result.kkt_multiplier == [w / result.rho for w in result.phi]
        assert check_saddle(inst, result.kkt_multiplier, 0).is_saddle
    assert certificates > 0


def test_saddle_point_implies_optimality():
    rng = np.random.default_rng(23)
    saddles = 0
    for _ in range(100):
        L = int(rng.integers(1, 3))
        n = int(rng.integers(2, 6))
        G = rng.integers(-3, 4, size=(L, n))
        G[:, 0] = -np.abs(G[:, 0])
        f = rng.integers(-3, 4, size=n)
        maxima = G.max(axis=0)
        feasible = [j for j in range(n) if maxima[j] <= 0]
        # any feasible point, optimal or not
        x0 = int(feasible[int(rng.integers(0, len(feasible)))])
        inst = ProgramInstance(objective=f.tolist(), constraints=G.tolist(), x0_index=x0, scalar_mode=EXACT)
        for phi in itertools.product(range(3), repeat=L):
            if check_saddle(inst, list(phi), 0).is_saddle:
                saddles += 1
                assert assert_optimal(inst, 0) == 0
    assert saddles > 0
