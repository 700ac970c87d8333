import math

import numpy as np
import pytest
from scipy.stats import binom, poisson

from cohsim import (
    ClickPattern,
    Outcome,
    OutcomePartition,
    Seed,
    check_success_condition,
    click_count_stats,
    click_counts,
    decide,
    estimate_success_probability,
    leading_block_partition,
    lecam_bound_check,
    map_state,
    poisson_binomial_exact,
    two_block_trial_generator,
    uniform_state,
)
from cohsim.mapping import ModeCoherentState

PART_2_2 = OutcomePartition(frozenset({1, 2}), frozenset({3, 4}))


def pattern(*bits):
    return ClickPattern(np.array(bits, dtype=bool))


def test_decide_all_dark_is_tie():
    p = pattern(0, 0, 0, 0)
    assert decide(p, PART_2_2) is Outcome.TIE
    assert click_counts(p, PART_2_2) == (0, 0)


def test_decide_clicks_only_in_first_set():
    assert decide(pattern(1, 0, 0, 0), PART_2_2) is Outcome.ZERO


def test_decide_majority():
    part = OutcomePartition(frozenset({1, 2, 3}), frozenset({4, 5, 6}))
    assert decide(pattern(1, 1, 1, 0, 1, 0), part) is Outcome.ZERO
    assert decide(pattern(0, 1, 0, 1, 1, 0), part) is Outcome.ONE


def test_partition_validation():
    with pytest.raises(ValueError):
        OutcomePartition(frozenset({1, 2}), frozenset({2, 3}))
    with pytest.raises(ValueError):
        OutcomePartition(frozenset({0}), frozenset({1}))
    with pytest.raises(ValueError):
        click_counts(pattern(1, 0), PART_2_2)


def test_click_count_stats_vacuum():
    c = ModeCoherentState(np.zeros(4, dtype=complex), 0.0)
    stats = click_count_stats(c, PART_2_2)
    assert stats.mu0 == stats.mu1 == stats.tau == 0.0


def test_click_count_stats_two_modes():
    # two modes in S_0 with click probability 0.1 each: mu0 = 0.2, tau0 = 0.02
    power = -math.log(0.9)  # per-mode |amp|^2 giving p = 0.1
    amps = np.sqrt([power, power, 0.0, 0.0]).astype(complex)
    c = ModeCoherentState.from_amplitudes(amps)
    stats = click_count_stats(c, PART_2_2)
    assert stats.mu0 == pytest.approx(0.2, abs=1e-12)
    assert stats.tau0 == pytest.approx(0.02, abs=1e-12)
    assert stats.mu1 == 0.0


def test_click_count_stats_uniform_hundred_modes():
    c = map_state(uniform_state(100), 1.0)
    part = OutcomePartition(frozenset(range(1, 101)), frozenset())
    stats = click_count_stats(c, part)
    assert stats.mu0 == pytest.approx(100 * (1 - math.exp(-0.01)), abs=1e-9)


def test_poisson_binomial_certain_click():
    np.testing.assert_allclose(poisson_binomial_exact([1.0]), [0.0, 1.0])


def test_poisson_binomial_hand_convolution():
    np.testing.assert_allclose(
        poisson_binomial_exact([0.1, 0.1]), [0.81, 0.18, 0.01], atol=1e-15
    )


def test_poisson_binomial_matches_binomial_closed_form():
    pmf = poisson_binomial_exact([0.05] * 20)
    np.testing.assert_allclose(pmf, binom.pmf(np.arange(21), 20, 0.05), atol=1e-12)


def test_poisson_binomial_normalization_and_mean():
    rng = Seed(80).rng()
    probs = rng.uniform(0, 1, 200)
    pmf = poisson_binomial_exact(probs)
    assert abs(pmf.sum() - 1.0) < 1e-10
    assert np.dot(np.arange(pmf.size), pmf) == pytest.approx(probs.sum(), rel=1e-10)


def test_poisson_binomial_input_validation():
    with pytest.raises(ValueError):
        poisson_binomial_exact([0.5, 1.2])
    with pytest.raises(ValueError):
        poisson_binomial_exact(np.full(10_001, 0.1))


# ---------------------------------------------------------------------------
# Poisson approximation bound
# ---------------------------------------------------------------------------


def test_lecam_bound_known_instance():
    check = lecam_bound_check([0.1, 0.1], {0})
    assert check.lhs == pytest.approx(abs(0.81 - math.exp(-0.2)), abs=1e-12)
    assert check.bound == pytest.approx(0.02, abs=1e-12)
    assert check.holds


def test_lecam_bound_zero_probabilities():
    check = lecam_bound_check([0.0, 0.0], {1, 2})
    assert check.lhs == 0.0
    assert check.bound == 0.0
    assert check.holds


def test_lecam_bound_event_beyond_support():
    # Poisson has mass above n, the Poisson-binomial does not
    check = lecam_bound_check([0.3, 0.3], {5, 6, 7})
    assert check.lhs > 0.0
    assert check.holds


def test_lecam_bound_random_sweep():
    rng = Seed(81).rng()
    for _ in range(100):
        n = int(rng.integers(1, 51))
        probs = rng.uniform(0.0, 0.2, n)
        event = set(np.flatnonzero(rng.random(n + 1) < 0.5).tolist())
        assert lecam_bound_check(probs, event).holds


def test_lecam_bound_total_variation_event():
    # the adversarial event where the pmfs disagree most
    rng = Seed(82).rng()
    for _ in range(25):
        n = int(rng.integers(2, 40))
        probs = rng.uniform(0.0, 0.3, n)
        pmf = poisson_binomial_exact(probs)
        mu = probs.sum()
        event = {k for k in range(n + 1) if pmf[k] > poisson.pmf(k, mu)}
        assert lecam_bound_check(probs, event).holds


# ---------------------------------------------------------------------------
# bounded-error success condition
# ---------------------------------------------------------------------------


def uniform_block_probs(p_s, d0, d1):
    probs = np.empty(d0 + d1)
    probs[:d0] = p_s / d0
    if d1:
        probs[d0:] = (1.0 - p_s) / d1
    return probs


def test_condition_fails_without_photons():
    probs = uniform_block_probs(0.9, 10, 10)
    report = check_success_condition(0.9, 0.1, 0.0, probs, leading_block_partition(10, 10))
    assert report.lhs >= 2.0
    assert not report.holds


def test_condition_report_is_algebraically_consistent():
    probs = uniform_block_probs(0.95, 1000, 1000)
    report = check_success_condition(
        0.95, 0.2, 20.0, probs, leading_block_partition(1000, 1000)
    )
    assert report.lhs + report.p_alpha_lower_bound == pytest.approx(1.0, abs=1e-12)


def test_condition_holds_for_small_probabilities_large_mu():
    probs = uniform_block_probs(0.95, 20_000, 20_000)
    report = check_success_condition(
        0.95, 0.2, 60.0, probs, leading_block_partition(20_000, 20_000)
    )
    assert report.holds
    assert report.stats.mu0 <= 0.95 * 60.0
    assert report.stats.mu1 <= 0.05 * 60.0


def test_condition_degenerate_empty_set_uses_unit_factor():
    # empty S_1: mu1 = 0 and min(1, 1/mu1) resolves to 1
    probs = uniform_block_probs(1.0, 100, 0)
    report = check_success_condition(1.0, 0.4, 1.0, probs, leading_block_partition(100, 0))
    tau = report.stats.tau
    assert report.lhs == pytest.approx(
        2 * math.exp(-1.0) * math.sqrt(2 * math.e) + tau, rel=1e-12
    )


def test_condition_validates_inputs():
    probs = uniform_block_probs(0.9, 10, 10)
    part = leading_block_partition(10, 10)
    with pytest.raises(ValueError):
        check_success_condition(0.5, 0.1, 1.0, probs, part)  # p_s too small
    with pytest.raises(ValueError):
        check_success_condition(0.9, 0.6, 1.0, probs, part)  # epsilon too large
    with pytest.raises(ValueError):
        check_success_condition(0.8, 0.1, 1.0, probs, part)  # p_s != S_0 mass


def test_condition_evaluates_single_set_instance():
    # everything on S_0, uniform over 1e4 modes at mu = 16: the report is a
    # direct evaluation, and the expected clicks stay below the photon budget
    d = 10_000
    probs = uniform_block_probs(1.0, d, 0)
    report = check_success_condition(1.0, 0.1, 16.0, probs, leading_block_partition(d, 0))
    assert report.stats.mu0 < 16.0
    assert report.stats.mu1 == 0.0
    expected_tau = d * (-math.expm1(-16.0 / d)) ** 2
    assert report.stats.tau == pytest.approx(expected_tau, rel=1e-12)
    assert report.lhs + report.p_alpha_lower_bound == pytest.approx(1.0, abs=1e-12)


def test_expected_clicks_below_photon_budget():
    # sum over a set of 1 - e^{-mu p} never exceeds mu * (set mass)
    rng = Seed(83).rng()
    for _ in range(30):
        d0 = int(rng.integers(1, 50))
        d1 = int(rng.integers(1, 50))
        raw = rng.uniform(0.01, 1.0, d0 + d1)
        probs = raw / raw.sum()
        mass0 = probs[:d0].sum()
        if mass0 <= 0.5:
            probs = probs[::-1].copy()
            d0, d1 = d1, d0
            mass0 = probs[:d0].sum()
        mu = float(rng.uniform(0.1, 20.0))
        report = check_success_condition(
            float(mass0), 0.25, mu, probs, leading_block_partition(d0, d1)
        )
        assert report.stats.mu0 <= mass0 * mu + 1e-12
        assert report.stats.mu1 <= (1.0 - mass0) * mu + 1e-12


def exact_win_probability(pmf0, pmf1):
    """P(C_0 > C_1) for independent counts with the given pmfs."""
    cdf1 = np.cumsum(pmf1)
    total = 0.0
    for a in range(1, pmf0.size):
        total += pmf0[a] * cdf1[min(a - 1, pmf1.size - 1)]
    return total


def test_win_probability_dominates_threshold_product():
    # P(C_0 > C_1) >= P(C_0 > mu/2) P(C_1 < mu/2) on exact small instances
    rng = Seed(84).rng()
    for _ in range(20):
        d0 = int(rng.integers(1, 12))
        d1 = int(rng.integers(1, 12))
        raw = rng.uniform(0.01, 1.0, d0 + d1)
        qubit_probs = raw / raw.sum()
        mu = float(rng.uniform(0.5, 8.0))
        click = -np.expm1(-mu * qubit_probs)
        pmf0 = poisson_binomial_exact(click[:d0])
        pmf1 = poisson_binomial_exact(click[d0:])
        win = exact_win_probability(pmf0, pmf1)
        half = mu / 2.0
        p0_above = sum(p for k, p in enumerate(pmf0) if k > half)
        p1_below = sum(p for k, p in enumerate(pmf1) if k < half)
        assert win >= p0_above * p1_below - 1e-12


def test_holding_instance_exact_success_exceeds_lower_bound():
    # uniform blocks make the counts Binomial, so the success probability of
    # the decision rule is computable exactly and must beat 1 - lhs
    p_s, eps, mu, d0, d1 = 0.95, 0.2, 60.0, 20_000, 20_000
    probs = uniform_block_probs(p_s, d0, d1)
    report = check_success_condition(p_s, eps, mu, probs, leading_block_partition(d0, d1))
    assert report.holds
    p0 = -math.expm1(-mu * p_s / d0)
    p1 = -math.expm1(-mu * (1 - p_s) / d1)
    ks = np.arange(0, 200)
    pmf1 = binom.pmf(ks, d1, p1)
    win = float(np.sum(pmf1 * binom.sf(ks, d0, p0)))
    assert win >= report.p_alpha_lower_bound
    assert win >= 1.0 - eps


# ---------------------------------------------------------------------------
# Monte Carlo estimation
# ---------------------------------------------------------------------------


def test_mc_always_correct_generator():
    def generator(rng):
        return pattern(1, 1, 0, 0)

    est = estimate_success_probability(generator, PART_2_2, 500, Seed(85))
    assert est.p_hat == 1.0


def test_mc_vacuum_with_ties_as_failure():
    def generator(rng):
        return pattern(0, 0, 0, 0)

    est = estimate_success_probability(generator, PART_2_2, 500, Seed(86))
    assert est.p_hat == 0.0
    assert est.ties == 500


def test_mc_vacuum_with_coin_ties():
    def generator(rng):
        return pattern(0, 0, 0, 0)

    est = estimate_success_probability(
        generator, PART_2_2, 20_000, Seed(87), tie_policy="coin"
    )
    assert abs(est.p_hat - 0.5) < 3 * math.sqrt(0.25 / 20_000)


def test_mc_conclusive_rate_generator():
    # a zero-error protocol that is conclusive with probability 1 - e^{-3}
    p_conclusive = -math.expm1(-3.0)
    part = OutcomePartition(frozenset({1}), frozenset({2}))

    def generator(rng):
        return ClickPattern(np.array([rng.random() < p_conclusive, False]))

    trials = 20_000
    est = estimate_success_probability(generator, part, trials, Seed(88))
    sigma = math.sqrt(p_conclusive * (1 - p_conclusive) / trials)
    assert abs(est.p_hat - p_conclusive) < 3 * sigma


def test_mc_rejects_bad_arguments():
    with pytest.raises(ValueError):
        estimate_success_probability(lambda rng: pattern(1, 0, 0, 0), PART_2_2, 0, Seed(89))
    with pytest.raises(ValueError):
        estimate_success_probability(
            lambda rng: pattern(1, 0, 0, 0), PART_2_2, 10, Seed(89), tie_policy="retry"
        )


def test_two_block_generator_count_distribution():
    gen = two_block_trial_generator(50, 0.2, 30, 0.1)
    part = leading_block_partition(50, 30)
    rng = Seed(90).rng()
    c0_sum = c1_sum = 0
    trials = 20_000
    for _ in range(trials):
        c0, c1 = click_counts(gen(rng), part)
        c0_sum += c0
        c1_sum += c1
    assert abs(c0_sum / trials - 10.0) < 3 * math.sqrt(50 * 0.2 * 0.8 / trials)
    assert abs(c1_sum / trials - 3.0) < 3 * math.sqrt(30 * 0.1 * 0.9 / trials)
