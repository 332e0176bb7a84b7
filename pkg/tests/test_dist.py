"""Closed-form laws: displacement, joint counts, fdd events, diagram blocks."""
from __future__ import annotations

import pytest

import oracles
from mallows.dist import (
    FddQuery,
    block_p2,
    conditional_l_given_r,
    displacement_pmf,
    fdd_probability,
    joint_rl_pmf,
)
from mallows.errors import DomainError
from mallows.qseries import QParam, pochhammer_table

P5 = QParam(0.5)
Q_GRID = (0.3, 0.5, 0.8)

# frozen reference values at q = 0.5, reproduced independently in
# tests/oracles.py (diagonal sums / constrained series / finite-model DP)
DISPLACEMENT_HALF = {
    0: 0.220643036097,
    1: 0.169035445855,
    2: 0.103215180483,
    3: 0.056850700525,
}
FDD_FROZEN = {
    (0, 0): 0.0813473137,
    (0, 1): 0.0475835576,
    (-1, 1): 0.0324822696,
    (-2, 3): 0.0059674360,
    (0, 0, 0): 0.0372305098,
}


# --------------------------------------------------------------------------
# displacement pmf
# --------------------------------------------------------------------------

def test_displacement_frozen_values():
    pmf = displacement_pmf(P5, radius=10)
    for d, want in DISPLACEMENT_HALF.items():
        assert pmf.prob(d) == pytest.approx(want, abs=5e-10), f"d={d}"


def test_displacement_symmetry_bit_exact():
    pmf = displacement_pmf(P5, radius=12)
    for d in range(1, 13):
        assert pmf.prob(d) == pmf.prob(-d), f"d={d}"


def test_displacement_tail_bound_and_normalization():
    for q in Q_GRID:
        radius = 14
        pmf = displacement_pmf(QParam(q), radius=radius)
        assert pmf.tail_bound == 2.0 * q**radius
        gap = 1.0 - sum(pmf.prob(d) for d in range(-radius, radius + 1))
        assert 0.0 < gap <= pmf.tail_bound, f"q={q}: gap {gap:.3e}"


def test_displacement_matches_diagonal_sum():
    for q in Q_GRID:
        pmf = displacement_pmf(QParam(q), radius=8)
        for d in range(0, 6):
            want = oracles.displacement_diag_sum(q, d)
            got = pmf.prob(d)
            assert got == pytest.approx(want, rel=1e-10), f"q={q} d={d}"


def test_displacement_out_of_radius_is_zero():
    # the table covers [-radius..radius]; outside it only tail_bound speaks
    pmf = displacement_pmf(P5, radius=5)
    assert pmf.prob(6) == 0.0
    assert pmf.prob(-17) == 0.0


# --------------------------------------------------------------------------
# joint and conditional (R, L) laws
# --------------------------------------------------------------------------

def test_joint_rl_frozen_corner():
    # P(R=0, L=0) = (1-q) <inf>_q
    poch_inf = pochhammer_table(P5).infinite_value
    assert joint_rl_pmf(P5, 0, 0) == pytest.approx(0.5 * poch_inf, rel=1e-13)
    assert joint_rl_pmf(P5, 0, 0) == pytest.approx(0.1443940475433012, abs=1e-14)


def test_joint_rl_marginal_is_geometric():
    for q in Q_GRID:
        p = QParam(q)
        for r in range(0, 11):
            total = sum(joint_rl_pmf(p, r, ell) for ell in range(0, 200))
            want = (1 - q) * q**r
            assert total == pytest.approx(want, abs=1e-10), f"q={q} r={r}"


def test_joint_rl_symmetric():
    for r in range(0, 8):
        for ell in range(0, 8):
            assert joint_rl_pmf(P5, r, ell) == joint_rl_pmf(P5, ell, r)


def test_left_count_mean():
    # E[L] = q / (1 - q): the left count marginal is geometric(q)
    for q in Q_GRID:
        p = QParam(q)
        mean = sum(
            ell * joint_rl_pmf(p, r, ell)
            for r in range(0, 140)
            for ell in range(0, 140)
        )
        assert mean == pytest.approx(q / (1 - q), abs=1e-9), f"q={q}"


def test_conditional_l_given_r_normalizes():
    for q in Q_GRID:
        p = QParam(q)
        for r in range(0, 9):
            total = sum(conditional_l_given_r(p, r, ell) for ell in range(0, 160))
            assert total == pytest.approx(1.0, abs=1e-10), f"q={q} r={r}"


def test_conditional_l_given_r_at_zero():
    # P(L=0 | R=r) = <inf>_q / <r>_q
    table = pochhammer_table(P5, 12)
    for r in range(0, 9):
        want = table.infinite_value / table.value(r)
        assert conditional_l_given_r(P5, r, 0) == pytest.approx(want, rel=1e-12)


def test_joint_rl_rejects_negative():
    with pytest.raises(DomainError):
        joint_rl_pmf(P5, -1, 0)
    with pytest.raises(DomainError):
        conditional_l_given_r(P5, 0, -2)


# --------------------------------------------------------------------------
# finite-dimensional displacement events
# --------------------------------------------------------------------------

def test_fdd_query_validation():
    with pytest.raises(DomainError):
        FddQuery(0, ())
    with pytest.raises(DomainError):
        FddQuery(2, (1,))


def test_fdd_frozen_values():
    for d, want in FDD_FROZEN.items():
        val, err = fdd_probability(P5, FddQuery(len(d), d), 1e-12)
        assert val == pytest.approx(want, abs=1e-9), f"d={d}"
        assert err < 1e-12 * max(val, 1.0)


def test_fdd_k1_equals_displacement():
    for q in Q_GRID:
        p = QParam(q)
        pmf = displacement_pmf(p, radius=8)
        for d in range(-6, 7):
            val, _ = fdd_probability(p, FddQuery(1, (d,)), 1e-12)
            assert val == pytest.approx(pmf.prob(d), rel=1e-10), f"q={q} d={d}"


def test_fdd_collision_is_impossible_event():
    val, err = fdd_probability(P5, FddQuery(2, (1, 0)), 1e-12)
    assert (val, err) == (0.0, 0.0)


def test_fdd_unsorted_is_q_power_times_sorted():
    # d = (1, -1) pins values (2, 1): one inversion against (0, 0)'s (1, 2)
    sorted_val, _ = fdd_probability(P5, FddQuery(2, (0, 0)), 1e-12)
    swapped_val, _ = fdd_probability(P5, FddQuery(2, (1, -1)), 1e-12)
    assert swapped_val == pytest.approx(0.5 * sorted_val, rel=1e-12)


def test_fdd_marginalizes_to_displacement():
    pmf = displacement_pmf(P5, radius=6)
    for d1 in (-2, 0, 1, 3):
        total = sum(
            fdd_probability(P5, FddQuery(2, (d1, d2)), 1e-12)[0]
            for d2 in range(-25, 26)
        )
        assert total == pytest.approx(pmf.prob(d1), abs=1e-6), f"d1={d1}"


def test_fdd_matches_constrained_series_oracle():
    for q in (0.3, 0.5):
        p = QParam(q)
        for d in [(0,), (-1, 1), (0, 0), (0, 1), (-2, 3), (0, 0, 0), (-1, 0, 2)]:
            want = oracles.fdd_sorted_oracle(q, list(d))
            got, _ = fdd_probability(p, FddQuery(len(d), d), 1e-12)
            assert got == pytest.approx(want, rel=1e-8), f"q={q} d={d}"


def test_fdd_matches_finite_model_dp():
    # pins centered in a size-50 model approximate the two-sided law to
    # roughly q^24 (measured diff <= 1.3e-8 across these cases)
    q = 0.5
    for d in [(0,), (2,), (-1, 1), (0, 0), (1, -1), (0, 0, 0)]:
        k = len(d)
        center = 24
        pins = {center + m: center + m + d[m - 1] for m in range(1, k + 1)}
        want = oracles.finite_pinned_prob(50, q, pins)
        got, _ = fdd_probability(P5, FddQuery(k, d), 1e-12)
        assert got == pytest.approx(want, abs=5e-8), f"d={d}"


# --------------------------------------------------------------------------
# diagram block probabilities
# --------------------------------------------------------------------------

def test_block_p2_empty_diagram_corner():
    # P(lambda_1 = 0) = <inf>_q
    poch_inf = pochhammer_table(P5).infinite_value
    assert block_p2(P5, (0,), (0,)) == pytest.approx(poch_inf, rel=1e-13)


def test_block_p2_row_marginal_normalizes():
    for b1 in range(0, 6):
        total = sum(block_p2(P5, (b1,), (a1,)) for a1 in range(0, 130))
        assert total == pytest.approx(1.0, abs=1e-8), f"b1={b1}"


@pytest.mark.parametrize(
    "b,a",
    [
        ((0,), (0,)),
        ((0,), (3,)),
        ((2,), (1,)),
        ((0, 1), (1, 1)),
        ((1, 0), (2, 1)),
        ((0, 0), (0, 0)),
        ((1, 2), (1, 0)),
    ],
)
def test_block_p2_matches_diagram_enumeration(b, a):
    pins = oracles.pins_from_gap_coords(b, a)
    want = oracles.diagram_pinned_prob(0.5, pins)
    got = block_p2(P5, b, a)
    assert got == pytest.approx(want, abs=1e-9), f"pins {pins}"
