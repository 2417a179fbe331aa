import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import SIGNS, all_strategy_distributions, random_distribution, strategy_distribution
from invbell.errors import MissingSupport
from invbell.protocol import Distribution, OutcomeQuadruple
from invbell.reality import (
    CertaintyPrediction,
    ResponseFunction,
    certainty_predictions,
    hardy_chain_check,
    response_model_refutation,
)
from invbell.stats import conditional, prob

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def constant_register_distribution():
    """Uniform (q1, q2) with q3 and q4 pinned to +1."""
    return Distribution({OutcomeQuadruple(q1, q2, 1, 1): 0.25 for q1 in SIGNS for q2 in SIGNS})


def identity_register_distribution():
    """q3 tracks q1 and q4 tracks q2 exactly, uniform over (q1, q2)."""
    return Distribution({OutcomeQuadruple(q1, q2, q1, q2): 0.25 for q1 in SIGNS for q2 in SIGNS})


# -------------------------------------------------------- certainty_predictions


def test_predictions_include_the_two_register_certainties(default_distribution):
    found = {
        (tuple(sorted(p.given.constraints.items())), p.predicted_variable, p.predicted_value)
        for p in certainty_predictions(default_distribution, 1e-9)
    }
    assert ((("q1", 1), ("q2", -1), ("q3", 1)), "q4", -1) in found
    assert ((("q1", -1), ("q2", 1), ("q4", 1)), "q3", -1) in found


def test_predictions_empty_on_uniform():
    assert certainty_predictions(Distribution.uniform(), 1e-9) == []


def test_predictions_recheckable(default_distribution):
    for p in certainty_predictions(default_distribution, 1e-9):
        value = conditional(default_distribution, {p.predicted_variable: p.predicted_value}, p.given)
        assert value >= 1.0 - 1e-9
        assert value == pytest.approx(p.confidence, abs=1e-15)
        assert prob(default_distribution, p.given) > 0.0


def test_predictions_epsilon_validation(default_distribution):
    with pytest.raises(ValueError):
        certainty_predictions(default_distribution, 0.5)
    with pytest.raises(ValueError):
        certainty_predictions(default_distribution, -0.1)


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_predictions_on_random_distributions_are_consistent(seed):
    rng = np.random.default_rng(seed)
    d = random_distribution(rng)
    epsilon = 0.05
    for p in certainty_predictions(d, epsilon):
        assert conditional(d, {p.predicted_variable: p.predicted_value}, p.given) >= 1.0 - epsilon


# ------------------------------------------------------------ hardy_chain_check


def test_chain_on_default_distribution(default_distribution):
    report = hardy_chain_check(default_distribution, 1e-9)
    assert report.f0 == pytest.approx(0.5, abs=1e-12)
    assert report.f1 == pytest.approx(1.0, abs=1e-12)
    assert report.f2 == pytest.approx(1.0, abs=1e-12)
    assert report.f3 == pytest.approx(0.0, abs=1e-12)
    assert report.established == (True, True, True, True)
    assert report.contradiction


def test_chain_on_uniform_distribution():
    report = hardy_chain_check(Distribution.uniform(), 1e-9)
    assert report.f1 == pytest.approx(0.5, abs=1e-12)
    assert report.f2 == pytest.approx(0.5, abs=1e-12)
    assert not report.contradiction


def test_chain_on_all_sixteen_strategies():
    for d in all_strategy_distributions():
        report = hardy_chain_check(d, 1e-9)
        assert not report.contradiction


def test_chain_on_constant_registers():
    report = hardy_chain_check(constant_register_distribution(), 1e-9)
    # F2's conditioning event is realizable, but q3=-1 never happens there
    assert report.established[2]
    assert report.f2 == 0.0
    assert not report.contradiction


def test_chain_unestablished_when_conditioning_vanishes():
    d = Distribution(
        {OutcomeQuadruple(q1, q2, 1, 1): 0.5 for q1, q2 in ((1, 1), (-1, -1))}
    )
    report = hardy_chain_check(d, 1e-9)
    assert not report.established[1]
    assert not report.established[2]
    assert not report.contradiction


def test_chain_epsilon_zero_agrees_with_tiny_epsilon(default_distribution):
    corpus = [default_distribution, Distribution.uniform(), constant_register_distribution()]
    corpus.extend(all_strategy_distributions())
    for d in corpus:
        strict = hardy_chain_check(d, 0.0)
        loose = hardy_chain_check(d, 1e-9)
        assert strict.contradiction == loose.contradiction
        assert strict.established == loose.established


def test_chain_epsilon_validation(default_distribution):
    with pytest.raises(ValueError):
        hardy_chain_check(default_distribution, 0.5)


# ------------------------------------------------------ response_model_refutation


def brute_force_survivors(d):
    """Re-derive the survivor set straight from the probability table."""
    survivors = set()
    for f_plus, f_minus, g_plus, g_minus in itertools.product(SIGNS, repeat=4):
        alive = True
        for q1 in SIGNS:
            for q2 in SIGNS:
                q3 = f_plus if q1 == 1 else f_minus
                q4 = g_plus if q2 == 1 else g_minus
                if d.probs[OutcomeQuadruple(q1, q2, q3, q4)] == 0.0:
                    alive = False
        if alive:
            survivors.add(((f_plus, f_minus), (g_plus, g_minus)))
    return survivors


def test_refutation_on_default_distribution(default_distribution):
    survivors = {
        ((f.at_plus, f.at_minus), (g.at_plus, g.at_minus))
        for f, g in response_model_refutation(default_distribution)
    }
    assert survivors == brute_force_survivors(default_distribution)
    assert ((1, 1), (-1, -1)) in survivors  # f constant +1, g constant -1
    assert survivors  # support alone cannot refute every response pair


def test_refutation_missing_support():
    with pytest.raises(MissingSupport):
        response_model_refutation(Distribution.point_mass(OutcomeQuadruple(1, 1, 1, 1)))


def test_refutation_identity_registers():
    survivors = response_model_refutation(identity_register_distribution())
    assert len(survivors) == 1
    f, g = survivors[0]
    assert (f.at_plus, f.at_minus) == (1, -1)
    assert (g.at_plus, g.at_minus) == (1, -1)


def test_refutation_uniform_keeps_everything():
    assert len(response_model_refutation(Distribution.uniform())) == 16


# --------------------------------------------------------------- ResponseFunction


def test_response_function_call():
    f = ResponseFunction("q3", "q1", at_plus=1, at_minus=-1)
    assert f(1) == 1 and f(-1) == -1


def test_response_function_validation():
    with pytest.raises(ValueError):
        ResponseFunction("q1", "q1", 1, 1)
    with pytest.raises(ValueError):
        ResponseFunction("q3", "q3", 1, 1)
    with pytest.raises(ValueError):
        ResponseFunction("q3", "q1", 0, 1)
