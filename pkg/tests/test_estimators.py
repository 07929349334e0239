import math

import numpy as np
import pytest

from akmc import (
    StoppingRule,
    expected_proportion,
    n_hat,
    p_hat,
    p_tilde,
    proportion_found,
    r_hat,
    r_tilde,
    should_stop,
)
from akmc.estimators import r_hat_per_term


def test_proportion_found_cases():
    assert proportion_found([1, 2], [3.0, 1.0]) == 1.0
    assert proportion_found([0, 0], [3.0, 1.0]) == 0.0
    assert proportion_found([1, 0], [3.0, 1.0]) == pytest.approx(0.75, abs=1e-15)


def test_expected_proportion_cases():
    assert expected_proportion([0.3, 0.7], [1.0, 2.0], 0.0) == 0.0
    assert expected_proportion([0.01, 0.02], [1.0, 2.0], 1e9) == pytest.approx(1.0, abs=1e-12)
    assert expected_proportion([math.log(2.0)] * 2, [1.0, 1.0], 1.0) == pytest.approx(0.5, rel=1e-14)


def test_p_tilde_cases():
    assert p_tilde(1.0, 0.0) == 0.0
    assert p_tilde(1.0, math.log(2.0)) == pytest.approx(0.5, rel=1e-14)
    ts = np.linspace(0.0, 5.0, 50)
    vals = [p_tilde(0.7, t) for t in ts]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_n_hat_branches():
    assert n_hat(0) == 0
    assert n_hat(1) == 0
    assert n_hat(2) == 2
    assert n_hat(3) == 3
    np.testing.assert_array_equal(n_hat(np.array([0, 1, 2, 5])), [0, 0, 2, 5])


def test_p_hat_values():
    assert p_hat(0) == 0.0
    assert p_hat(1) == 0.0
    assert p_hat(2) == pytest.approx(1.0 - math.exp(-2.0), rel=1e-14)
    assert 1.0 - math.exp(-2.0) == pytest.approx(0.864665, abs=1e-6)


def test_r_tilde_cases():
    # a single found pathway reduces to its p_tilde, whatever the weights
    t = 0.37
    assert r_tilde([1, 0], [5.0, 7.0], [0.9, 0.1], t) == pytest.approx(
        p_tilde(0.9, t), rel=1e-14
    )
    # equal p_tilde across found pathways factors out
    k_hi = [0.4, 0.4, 0.4]
    assert r_tilde([1, 2, 1], [1.0, 2.0, 5.0], k_hi, 1.3) == pytest.approx(
        p_tilde(0.4, 1.3), rel=1e-14
    )
    # chi = (1, 0), k = (3, 1), p_tilde_1 = 0.9: only found terms enter
    t90 = math.log(10.0)  # 1 - exp(-t90) = 0.9
    assert r_tilde([1, 0], [3.0, 1.0], [1.0, 123.0], t90) == pytest.approx(0.9, rel=1e-12)


def test_r_hat_cases():
    assert r_hat([1, 1], [1.0, 2.0]) == 0.0
    assert r_hat([2, 0], [1.0, 1.0]) == pytest.approx(1.0 - math.exp(-2.0), rel=1e-14)
    assert r_hat([0, 0], [1.0, 1.0]) == 0.0


def test_zero_before_first_exit():
    assert r_tilde([0, 0, 0], [1.0, 1.0, 1.0], [1.0, 1.0, 1.0], 5.0) == 0.0
    assert r_hat([0, 0, 0], [1.0, 1.0, 1.0]) == 0.0
    rule = StoppingRule(epsilon=0.9999)
    assert not should_stop(rule, 0.0)


def test_r_hat_two_routes_agree():
    rng = np.random.default_rng(321)
    for _ in range(500):
        n_pathways = rng.integers(1, 8)
        counts = rng.poisson(1.2, size=n_pathways)
        k = rng.uniform(0.1, 10.0, size=n_pathways)
        assert r_hat(counts, k) == pytest.approx(r_hat_per_term(counts, k), abs=1e-14)


def test_estimators_stay_in_unit_interval():
    rng = np.random.default_rng(7)
    for _ in range(300):
        n_pathways = rng.integers(1, 10)
        counts = rng.poisson(0.8, size=n_pathways)
        k_lo = rng.uniform(1e-3, 1e3, size=n_pathways)
        k_hi = rng.uniform(1e-3, 1e3, size=n_pathways)
        t = rng.uniform(0.0, 50.0)
        for value in (
            proportion_found(counts, k_lo),
            r_tilde(counts, k_lo, k_hi, t),
            r_hat(counts, k_lo),
            expected_proportion(k_hi, k_lo, t),
        ):
            assert 0.0 <= value <= 1.0


def test_scaling_invariance_under_common_rescale():
    rng = np.random.default_rng(12)
    counts = rng.poisson(1.0, size=6)
    k_lo = rng.uniform(0.1, 5.0, size=6)
    k_hi = rng.uniform(0.1, 5.0, size=6)
    kappa = rng.uniform(0.1, 5.0, size=6)
    t = 0.9
    base = (
        proportion_found(counts, k_lo),
        expected_proportion(kappa, k_lo, t),
        r_tilde(counts, k_lo, k_hi, t),
        r_hat(counts, k_lo),
    )
    for scale in (1e-6, 0.5, 3.0, 1e7):
        scaled = (
            proportion_found(counts, scale * k_lo),
            expected_proportion(kappa, scale * k_lo, t),
            r_tilde(counts, scale * k_lo, k_hi, t),
            r_hat(counts, scale * k_lo),
        )
        for a, b in zip(base, scaled):
            assert b == pytest.approx(a, abs=1e-14)


def test_should_stop_strictness():
    rule = StoppingRule(epsilon=0.1)
    assert should_stop(rule, 0.95)
    assert not should_stop(rule, 0.9)  # exactly at threshold: strict inequality
    tight = StoppingRule(epsilon=1.0 - 1e-12)
    assert should_stop(tight, 1e-9)


def test_stopping_rule_validation():
    with pytest.raises(ValueError):
        StoppingRule(epsilon=0.0)
    with pytest.raises(ValueError):
        StoppingRule(epsilon=1.0)
    with pytest.raises(ValueError):
        StoppingRule(epsilon=0.5, estimator="oracle")


def test_conditional_moments_of_counting_estimators():
    # Conditioned on at least one event, the singleton-zeroed count is an
    # unbiased estimate of kappa*t and p_hat underestimates p on average.
    rng = np.random.default_rng(2718)
    for kt in (0.3, 1.0, 2.5):
        draws = rng.poisson(kt, size=400_000)
        cond = draws[draws >= 1]
        nh = np.asarray(n_hat(cond), dtype=float)
        se = nh.std(ddof=1) / math.sqrt(nh.size)
        assert abs(nh.mean() - kt) <= 3.0 * se
        ph = np.asarray(p_hat(cond), dtype=float)
        se_p = ph.std(ddof=1) / math.sqrt(ph.size)
        assert ph.mean() <= (1.0 - math.exp(-kt)) + 3.0 * se_p
