"""Branch-tree planning, sequential assembly, and qubit-cost reports."""

from dataclasses import replace

import pytest

from qsticker.codes import (
    OperatorSet,
    direct_sum,
    hgp,
    repetition_check,
    validate_code,
)
from qsticker.gf2 import Gf2Matrix, solve_left
from qsticker.glue import GlueError
from qsticker.branching import (
    assemble_plan,
    estimate_qubit_cost,
    plan_branching,
)


def blocks(count, distance=2):
    c5 = replace(hgp(repetition_check(2), repetition_check(2)), distance=2)
    code = c5
    for _ in range(count - 1):
        code = direct_sum(code, c5)
    return replace(code, distance=distance)


def sigma_from_indices(code, *index_sets):
    rows = []
    for idxs in index_sets:
        acc = 0
        for i in idxs:
            acc ^= code.jz.bits[i]
        rows.append(acc)
    return OperatorSet("Z", Gf2Matrix(rows, code.n))


def test_tree_arithmetic_q4():
    c = blocks(4)
    s = sigma_from_indices(c, (0,), (1,), (2,), (3,))
    tree = plan_branching(c, s)
    assert tree.levels == 2
    assert len(tree.nodes) == 6  # S1..S6
    assert len(tree.leaf_nodes()) == 4
    assert len(tree.level_nodes(1)) == 2
    assert len(tree.level_nodes(2)) == 4


def test_tree_arithmetic_q2_and_q5():
    c2 = blocks(2)
    t2 = plan_branching(c2, sigma_from_indices(c2, (0,), (1,)))
    assert t2.levels == 1 and len(t2.nodes) == 2

    c5 = blocks(5)
    t5 = plan_branching(c5, sigma_from_indices(c5, (0,), (1,), (2,), (3,), (4,)))
    assert t5.levels == 3
    assert len(t5.leaf_nodes()) == 5
    # {3} becomes a singleton at level 2 and rides along unsplit
    assert any(len(n.ops) == 1 and n.level == 2 for n in t5.nodes)


def test_tree_rejects_single_operator():
    c = blocks(2)
    with pytest.raises(GlueError):
        plan_branching(c, sigma_from_indices(c, (0,)))


def test_assemble_q2_measures_both():
    c = blocks(2)
    s = sigma_from_indices(c, (0,), (1,))
    plan = assemble_plan(c, s)
    final = plan.final_code
    assert final.k == c.k - 2
    assert validate_code(final).ok
    # both original operators are stabilisers of the final code
    padded = s.vectors.hstack(Gf2Matrix.zeros(2, final.n - c.n))
    assert solve_left(final.hz, padded) is not None


def test_assemble_q2_overlapping_operators():
    # Z1 and Z1 Z2 share the first block's support
    c = blocks(2)
    s = sigma_from_indices(c, (0,), (0, 1))
    plan = assemble_plan(c, s)
    final = plan.final_code
    assert final.k == c.k - 2
    padded = s.vectors.hstack(Gf2Matrix.zeros(2, final.n - c.n))
    assert solve_left(final.hz, padded) is not None
    # surviving logicals pair correctly
    assert final.jx.mul_transpose(final.jz) == Gf2Matrix.identity(final.k)


def test_assemble_leaf_level_incidence_is_one():
    c = blocks(2)
    s = sigma_from_indices(c, (0,), (1,))
    plan = assemble_plan(c, s)
    assert plan.incidence[plan.leaf_level] <= 1


def test_assemble_q3_multi_level_with_passthrough():
    # q=3 exercises two branch levels and a singleton that stops early
    c = blocks(3)
    s = sigma_from_indices(c, (0,), (1,), (0, 2))
    plan = assemble_plan(c, s)
    final = plan.final_code
    assert final.k == c.k - 3
    assert validate_code(final).ok
    padded = s.vectors.hstack(Gf2Matrix.zeros(3, final.n - c.n))
    assert solve_left(final.hz, padded) is not None
    assert plan.incidence[plan.leaf_level] <= 1
    assert len(plan.pastes) == 4 + 3  # 4 branch nodes + 3 leaves


def test_cost_ds_single_operator():
    c = blocks(1)
    s = sigma_from_indices(c, (0,))
    rep = estimate_qubit_cost(c, s, "ds")
    fine_n_g = rep.per_level[0]
    assert rep.measured_total == fine_n_g  # single sticker, one level
    assert rep.bounds["bound_value"] == len(
        [j for j in range(c.n) if s.vectors.bits[0] >> j & 1]
    ) * c.distance * 1
    assert rep.measured_total > 0


def test_cost_ds_not_more_than_bfb_on_toy_code():
    c = blocks(4)
    s = sigma_from_indices(c, (0,), (1,), (2,), (3,))
    ds = estimate_qubit_cost(c, s, "ds")
    bfb = estimate_qubit_cost(c, s, "bfb")
    assert ds.measured_total <= bfb.measured_total


def test_cost_bfb_levels_shrink_geometrically():
    c = blocks(8)
    s = sigma_from_indices(c, *[(i,) for i in range(8)])
    bfb = estimate_qubit_cost(c, s, "bfb")
    # per-operator branch population halves per level: totals level 1
    # and level 2 cover the same supports, later levels never grow
    assert len(bfb.per_level) >= 3
    assert bfb.per_level[-1] >= bfb.per_level[0]  # leaves carry the d factor


def test_cost_respects_formula_bounds():
    c = blocks(4)
    s = sigma_from_indices(c, (0,), (1,), (2, 3), (3,))
    ds = estimate_qubit_cost(c, s, "ds")
    assert ds.measured_total <= ds.bounds["bound_value"] * 4
    bfb = estimate_qubit_cost(c, s, "bfb")
    assert bfb.measured_total <= bfb.bounds["bound_value"] * 8


def test_cost_requires_distance_or_dr():
    c = replace(blocks(2), distance=None)
    s = sigma_from_indices(c, (0,), (1,))
    with pytest.raises(ValueError):
        estimate_qubit_cost(c, s, "ds")
    rep = estimate_qubit_cost(c, s, "ds", d_r=3)
    assert rep.d_r == 3
