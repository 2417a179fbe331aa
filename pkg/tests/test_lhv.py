import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import EXPECTED_CONDITIONAL_ROWS, SIGNS
from invbell.errors import MissingSupport
from invbell.lhv import (
    CHSH_SIGN_PATTERNS,
    PAIR_ORDER,
    ConditionalTable,
    DeterministicStrategy,
    conditional_table,
    enumerate_strategies,
    local_polytope_check,
    no_signaling_check,
    pair_index,
    pr_box_table,
    strategy_chsh,
    strategy_table,
)
from invbell.protocol import Distribution, OutcomeQuadruple

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def product_table(p3_plus, p3_minus, p4_plus, p4_minus):
    """P(q3|q1) P(q4|q2) with the given probabilities of the +1 output."""
    rows = np.zeros((4, 4))
    for i, (q1, q2) in enumerate(PAIR_ORDER):
        p3 = p3_plus if q1 == 1 else p3_minus
        p4 = p4_plus if q2 == 1 else p4_minus
        for j, (q3, q4) in enumerate(PAIR_ORDER):
            rows[i, j] = (p3 if q3 == 1 else 1 - p3) * (p4 if q4 == 1 else 1 - p4)
    return ConditionalTable(rows)


# ------------------------------------------------------------ ConditionalTable


def test_table_validation_rejects_bad_shape():
    with pytest.raises(ValueError):
        ConditionalTable(np.zeros((4, 3)))


def test_table_validation_rejects_negative():
    rows = np.full((4, 4), 0.25)
    rows[0, 0] = -0.25
    rows[0, 1] = 0.75
    with pytest.raises(ValueError):
        ConditionalTable(rows)


def test_table_validation_rejects_unnormalized_rows():
    with pytest.raises(ValueError):
        ConditionalTable(np.full((4, 4), 0.3))


def test_table_accessors():
    t = pr_box_table()
    assert t.entry(-1, -1, 1, -1) == 0.5
    assert t.entry(-1, -1, 1, 1) == 0.0
    assert t.output_marginal("q3", 1, 1) == 0.5


# ---------------------------------------------------------- conditional_table


def test_table_of_default_distribution(default_distribution):
    t = conditional_table(default_distribution)
    assert np.abs(t.entries - EXPECTED_CONDITIONAL_ROWS).max() < 1e-12


def test_table_of_uniform_distribution():
    t = conditional_table(Distribution.uniform())
    assert np.abs(t.entries - 0.25).max() < 1e-15


def test_table_missing_support():
    with pytest.raises(MissingSupport):
        conditional_table(Distribution.point_mass(OutcomeQuadruple(1, 1, 1, 1)))


# ---------------------------------------------------------- no_signaling_check


def test_default_table_signals(default_distribution):
    report = no_signaling_check(conditional_table(default_distribution), tol=1e-9)
    assert report.delta_q3 == pytest.approx(0.5, abs=1e-12)
    assert report.delta_q4 == pytest.approx(0.5, abs=1e-12)
    assert report.signaling


def test_product_tables_do_not_signal():
    t = product_table(0.25, 0.75, 0.5, 1.0)
    report = no_signaling_check(t, tol=1e-9)
    assert report.delta_q3 == 0.0
    assert report.delta_q4 == 0.0
    assert not report.signaling


@given(seeds)
@settings(max_examples=60, deadline=None)
def test_random_product_tables_do_not_signal(seed):
    rng = np.random.default_rng(seed)
    t = product_table(*rng.random(4))
    report = no_signaling_check(t, tol=1e-9)
    assert report.delta_q3 < 1e-12
    assert report.delta_q4 < 1e-12


def test_pr_box_does_not_signal():
    report = no_signaling_check(pr_box_table(), tol=1e-9)
    assert report.delta_q3 == 0.0
    assert report.delta_q4 == 0.0


def test_no_signaling_rejects_negative_tol(default_distribution):
    with pytest.raises(ValueError):
        no_signaling_check(conditional_table(default_distribution), tol=-1.0)


# -------------------------------------------------------- enumerate_strategies


def test_sixteen_strategies_with_two_valued_chsh():
    strategies = enumerate_strategies()
    assert len(strategies) == 16
    values = [v for _, v in strategies]
    assert set(values) == {-2.0, 2.0}
    assert max(values) == 2.0
    assert min(values) == -2.0


def test_constant_strategy_value():
    s = DeterministicStrategy(f=(1, 1), g=(1, 1))
    assert strategy_chsh(s) == 2.0


def test_identity_f_constant_g_value():
    # E(q1, q2) = q1, so the combination is 1 + 1 - 1 - (-1) = 2
    s = DeterministicStrategy(f=(1, -1), g=(1, 1))
    assert strategy_chsh(s) == 2.0


def test_strategy_validation():
    with pytest.raises(ValueError):
        DeterministicStrategy(f=(0, 1), g=(1, 1))


# ------------------------------------------------------- local_polytope_check


def test_every_strategy_table_is_local():
    for s, _ in enumerate_strategies():
        report = local_polytope_check(strategy_table(s), tol=1e-9)
        assert report.verdict == "local"
        assert not report.signaling.signaling


@given(seeds)
@settings(max_examples=100, deadline=None)
def test_mixtures_of_strategies_stay_local(seed):
    rng = np.random.default_rng(seed)
    tables = [strategy_table(s).entries for s, _ in enumerate_strategies()]
    weights = rng.random(16)
    weights /= weights.sum()
    mixed = ConditionalTable(sum(w * t for w, t in zip(weights, tables)))
    report = local_polytope_check(mixed, tol=1e-9)
    assert max(report.combination_values) <= 2.0 + 1e-12
    assert report.verdict == "local"


def test_default_table_verdict_is_signaling(default_distribution):
    report = local_polytope_check(conditional_table(default_distribution), tol=1e-9)
    assert report.verdict == "signaling"
    assert report.witness_value == pytest.approx(0.5, abs=1e-12)


def test_pr_box_is_nonlocal_nosignaling():
    report = local_polytope_check(pr_box_table(), tol=1e-9)
    assert report.verdict == "nonlocal-nosignaling"
    assert report.witness_value == pytest.approx(4.0, abs=1e-12)
    assert report.witness_signs is not None


def test_eight_sign_patterns_are_distinct():
    assert len(set(CHSH_SIGN_PATTERNS)) == 8
    for pattern in CHSH_SIGN_PATTERNS:
        assert sorted(pattern) in ([-1, 1, 1, 1], [-1, -1, -1, 1])


def relabel(table, variable):
    """Flip the +-1 labels of one variable of a conditional table."""
    entries = table.entries.copy()
    if variable == "q1":
        entries = entries[[2, 3, 0, 1], :]
    elif variable == "q2":
        entries = entries[[1, 0, 3, 2], :]
    elif variable == "q3":
        entries = entries[:, [2, 3, 0, 1]]
    elif variable == "q4":
        entries = entries[:, [1, 0, 3, 2]]
    return ConditionalTable(entries)


@pytest.mark.parametrize("variable", ["q1", "q2", "q3", "q4"])
def test_combination_magnitudes_invariant_under_relabeling(variable, default_distribution):
    for table in (pr_box_table(), conditional_table(default_distribution), strategy_table(DeterministicStrategy((1, -1), (-1, 1)))):
        base = local_polytope_check(table, tol=1e-9)
        flipped = local_polytope_check(relabel(table, variable), tol=1e-9)
        assert sorted(abs(v) for v in base.combination_values) == pytest.approx(
            sorted(abs(v) for v in flipped.combination_values), abs=1e-12
        )


# ------------------------------------------------------------------- fixtures


def test_pair_index_ordering():
    assert [pair_index(a, b) for a, b in PAIR_ORDER] == [0, 1, 2, 3]


def test_strategy_table_rows_are_point_masses():
    for s, _ in enumerate_strategies():
        t = strategy_table(s)
        for i, (q1, q2) in enumerate(PAIR_ORDER):
            assert t.entries[i].sum() == 1.0
            assert t.entry(q1, q2, s.f_of(q1), s.g_of(q2)) == 1.0
