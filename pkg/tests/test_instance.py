import sys
import os

sys.path.append(os.path.dirname(os.path.dirname(__file__)))

from fractions import Fraction

import numpy as np
import pytest

from infsup.exceptions import InstanceError, PreconditionError
from infsup.instance import (
    assert_optimal, combined_family, feasible_indices, generate_convex_demo, generate_paper_example,
    load_instance, objective_shifted_family, parse_instance, serialize_instance,
)
from infsup.models import ProgramInstance, ScalarMode
from infsup.utils.scalars import as_matrix, as_vector

EXACT = ScalarMode.EXACT
FLOAT = ScalarMode.FLOAT


def test_parse_instance_fills_default_labels():
    inst = parse_instance('{"objective": [1, 2, 3], "constraints": [[0, -1, 1]], "x0_index": 1}')
    assert inst.lambda_labels == ["g1"]
    assert inst.x_labels == ["x1", "x2", "x3"]
    assert inst.n == 3 and inst.L == 1
    assert inst.x0_index == 1


def test_parse_instance_exact_reads_decimals_as_ratios():
    inst = parse_instance('{"objective": [0.5, 0.1], "constraints": [["1/3", -2]], "x0_index": 0}', EXACT)
    assert inst.objective == [Fraction(1, 2), Fraction(1, 10)]
    assert inst.constraints == [[Fraction(1, 3), Fraction(-2)]]
    assert isinstance(inst.x0_index, int)


@pytest.mark.parametrize("text, message", [
    ('{"objective": [1, 2], "constraints": [[1, 2], [3]]}',
     "constraints[1]: row length mismatch: 1 entries, expected 2"),
    ('{"objective": [1, 2], "constraints": [[1, 2]], "x0_index": 5}', "x0_index: index 5 out of range 0..1"),
    ('{"constraints": [[1, 2]]}', "objective: missing field"),
    ('{"objective": [1, NaN], "constraints": [[1, 2]]}', "non-finite literal NaN"),
    ('{"objective": [1, 1e400], "constraints": [[1, 2]]}', "objective[1]: non-finite entry"),
    ('{"objective": [1, "abc"], "constraints": [[1, 2]]}', "objective[1]"),
    ('[1, 2]', "instance must be a JSON object"),
    ('{"objective": [1, 2], ', "malformed JSON"),
])
def test_parse_instance_rejects_bad_input(text, message):
    with pytest.raises(InstanceError) as exc:
        parse_instance(text)
    assert message in exc.value.detail


@pytest.mark.parametrize("mode", [FLOAT, EXACT])
@pytest.mark.parametrize("literal", ["1.0", "0.5", "1e0"])
def test_parse_instance_rejects_decimal_x0_index(mode, literal):
    text = '{"objective": [1, 2], "constraints": [[0, 0]], "x0_index": %s}' % literal
    with pytest.raises(InstanceError) as exc:
        parse_instance(text, mode)
    assert exc.value.field_path == "x0_index"


def test_serialize_then_parse_keeps_exact_entries():
    inst = ProgramInstance(objective=[Fraction(1, 3), 2], constraints=[[Fraction(-1, 8), 0]],
                           x0_index=1, scalar_mode=EXACT)
    text = serialize_instance(inst)
    assert '"1/3"' in text and '"-0.125"' in text
    assert parse_instance(text, EXACT) == inst


def test_paper_example_smallest_truncation():
    inst = generate_paper_example(1, [-1, 0, 1], EXACT)
    assert inst.constraints == [[1, 0, -1]]
    assert inst.objective == [-1, 0, 1]
    assert inst.x0_index == 1
    assert inst.lambda_labels == ["n=1"]
    assert combined_family(inst).tolist() == [[1, 0, -1], [-1, 0, 1]]


def test_paper_example_rows_are_exact_cubes():
    grid = ["-2", "-1", "-0.5", "0", "0.5", "1", "2", "10"]
    inst = generate_paper_example(4, grid, EXACT)
    points = [Fraction(x) for x in grid]
    for n, row in enumerate(inst.constraints, start=1):
        assert row == [-(x ** 3) / n for x in points]


@pytest.mark.parametrize("N, grid", [(0, [0, 1]), (-2, [0, 1]), (1, []), (1, [1, 2])])
def test_paper_example_preconditions(N, grid):
    with pytest.raises(PreconditionError):
        generate_paper_example(N, grid)


def test_convex_demo_requires_minus_one():
    with pytest.raises(PreconditionError):
        generate_convex_demo([0, 1, 2])
    inst = generate_convex_demo([-2, -1, 0])
    assert inst.objective == [4.0, 1.0, 0.0]
    assert inst.constraints == [[-1.0, 0.0, 1.0]]
    assert inst.x0_index == 1


def test_feasible_indices_on_smallest_truncation():
    inst = generate_paper_example(1, [-1, 0, 1], EXACT)
    assert feasible_indices(inst, 0) == [1, 2]


def test_assert_optimal_gap_zero_at_origin():
    inst = generate_paper_example(2, [-1, 0, 1, 2], EXACT)
    assert assert_optimal(inst, 0) == 0


def test_assert_optimal_reports_positive_gap():
    inst = ProgramInstance(objective=[3, 1], constraints=[[-1, -1]], x0_index=0)
    assert assert_optimal(inst) == pytest.approx(2.0)


def test_assert_optimal_rejects_infeasible_x0():
    inst = ProgramInstance(objective=[0, 1], constraints=[[1, -1]], x0_index=0)
    with pytest.raises(PreconditionError):
        assert_optimal(inst)


def test_assert_optimal_rejects_empty_feasible_set():
    inst = ProgramInstance(objective=[0, 1], constraints=[[1, 2]], x0_index=0)
    with pytest.raises(PreconditionError):
        assert_optimal(inst)


def test_combined_family_requires_x0():
    inst = ProgramInstance(objective=[0, 1], constraints=[[1, 2]])
    with pytest.raises(InstanceError):
        combined_family(inst)


def test_objective_shifted_family():
    f = as_vector([1, 2], EXACT)
    G = as_matrix([[3, 3], [0, 5]], EXACT)
    D = objective_shifted_family(f, G, Fraction(1, 2))
    assert D.tolist() == [[Fraction(3, 2), Fraction(1, 2)], [Fraction(-3, 2), Fraction(5, 2)]]


def test_load_instance_missing_file(tmp_path):
    with pytest.raises(InstanceError):
        load_instance(str(tmp_path / "missing.json"))


def test_load_instance_from_file(tmp_path):
    path = tmp_path / "demo.json"
    path.write_text(serialize_instance(generate_convex_demo([-2, -1, 0])), encoding="utf-8")
    inst = load_instance(str(path))
    assert inst.x_labels == ["x=-2.0", "x=-1.0", "x=0.0"]
    assert np.allclose(inst.objective_vector(), [4.0, 1.0, 0.0])


def test_serialize_then_parse_keeps_float_entries():
    rng = np.random.default_rng(41)
    for _ in range(20):
        L, n = int(rng.integers(1, 4)), int(rng.integers(1, 6))
        inst = ProgramInstance(objective=rng.uniform(-5, 5, size=n).tolist(),
                               constraints=rng.uniform(-5, 5, size=(L, n)).tolist(),
                               x0_index=int(rng.integers(0, n)))
        assert parse_instance(serialize_instance(inst)) == inst


def test_feasible_indices_grow_with_tolerance():
    rng = np.random.default_rng(43)
    tols = [0, Fraction(1, 4), Fraction(1, 2), 1, 2]
    for _ in range(50):
        L, n = int(rng.integers(1, 4)), int(rng.integers(1, 7))
        G = (rng.integers(-8, 9, size=(L, n)) / 4).tolist()
        inst = ProgramInstance(objective=[0] * n, constraints=G, scalar_mode=EXACT)
        previous = set()
        for tol in tols:
            current = set(feasible_indices(inst, tol))
            assert previous <= current
            previous = current
