"""Bounded-error decision machinery for two-outcome coherent-state protocols.

A projective decision between two subspaces turns, after the coherent-state
translation, into counting clicks over two disjoint sets of modes S_0 and S_1
and picking the set with more clicks.  Each click count is a Poisson-binomial
random variable; this module provides

* the click-count decision rule (:func:`decide`),
* exact Poisson-binomial pmfs (:func:`poisson_binomial_exact`),
* Le Cam's Poisson-approximation bound
  |Pr(C in A) - Pr(L in A)| <= min(1, 1/mu) * sum_k p_k^2
  for a Poisson L of matched mean (:func:`lecam_bound_check`),
* a sufficient condition for the translated protocol to keep the original
  bounded error (:func:`check_success_condition`), and
* seeded Monte Carlo estimation of the success probability
  (:func:`estimate_success_probability`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable

import numpy as np
from scipy.stats import poisson

from .core import Seed
from .detection import ClickPattern, click_probabilities
from .mapping import ModeCoherentState

_POISSON_BINOMIAL_CAP = 10_000


class Outcome(Enum):
    ZERO = 0
    ONE = 1
    TIE = 2


@dataclass(frozen=True)
class OutcomePartition:
    """Two disjoint sets of mode labels (1-based, matching mode numbering)."""

    s0: frozenset[int]
    s1: frozenset[int]

    def __post_init__(self) -> None:
        s0 = frozenset(int(k) for k in self.s0)
        s1 = frozenset(int(k) for k in self.s1)
        if s0 & s1:
            raise ValueError(f"mode sets overlap: {sorted(s0 & s1)}")
        if any(k < 1 for k in s0 | s1):
            raise ValueError("mode labels must be >= 1")
        object.__setattr__(self, "s0", s0)
        object.__setattr__(self, "s1", s1)
        i0 = np.array(sorted(s0), dtype=np.int64) - 1
        i1 = np.array(sorted(s1), dtype=np.int64) - 1
        i0.setflags(write=False)
        i1.setflags(write=False)
        object.__setattr__(self, "_i0", i0)
        object.__setattr__(self, "_i1", i1)
        object.__setattr__(self, "_max_label", max(max(s0, default=0), max(s1, default=0)))

    def indices(self) -> tuple[np.ndarray, np.ndarray]:
        """0-based array positions for each set (cached at construction)."""
        return self._i0, self._i1

    @property
    def max_label(self) -> int:
        return self._max_label


def click_counts(pattern: ClickPattern, partition: OutcomePartition) -> tuple[int, int]:
    if partition.max_label > pattern.dim:
        raise ValueError("pattern does not cover all partition mode labels")
    i0, i1 = partition.indices()
    return int(pattern.clicks[i0].sum()), int(pattern.clicks[i1].sum())


def decide(pattern: ClickPattern, partition: OutcomePartition) -> Outcome:
    """More clicks in S_0 means ZERO, more in S_1 means ONE, equal means TIE.

    Tie resolution (including the all-vacuum pattern) is caller policy; see
    :func:`estimate_success_probability`.
    """
    c0, c1 = click_counts(pattern, partition)
    if c0 > c1:
        return Outcome.ZERO
    if c1 > c0:
        return Outcome.ONE
    return Outcome.TIE


@dataclass(frozen=True)
class ClickCountStats:
    """Moments of the per-set click counts: mu_b = E[C_b], tau_b = sum p_k^2."""

    mu0: float
    mu1: float
    tau0: float
    tau1: float

    @property
    def tau(self) -> float:
        return self.tau0 + self.tau1


def click_count_stats(c: ModeCoherentState, partition: OutcomePartition) -> ClickCountStats:
    if partition.max_label > c.dim:
        raise ValueError("state does not cover all partition mode labels")
    probs = click_probabilities(c)
    i0, i1 = partition.indices()
    p0, p1 = probs[i0], probs[i1]
    return ClickCountStats(
        mu0=float(p0.sum()),
        mu1=float(p1.sum()),
        tau0=float((p0**2).sum()),
        tau1=float((p1**2).sum()),
    )


def poisson_binomial_exact(probs) -> np.ndarray:
    """Exact pmf of a sum of independent Bernoulli(p_k), k = 1..n.

    Dynamic-programming convolution, O(n^2); index k of the result is
    Pr(sum = k).
    """
    probs = np.atleast_1d(np.asarray(probs, dtype=np.float64))
    if probs.ndim != 1:
        raise ValueError("probs must be a vector")
    if np.any((probs < 0.0) | (probs > 1.0)):
        raise ValueError("probabilities must lie in [0, 1]")
    if probs.size > _POISSON_BINOMIAL_CAP:
        raise ValueError(f"size {probs.size} exceeds cap {_POISSON_BINOMIAL_CAP}")
    pmf = np.array([1.0])
    for p in probs:
        nxt = np.zeros(pmf.size + 1)
        nxt[:-1] = pmf * (1.0 - p)
        nxt[1:] += pmf * p
        pmf = nxt
    return pmf


@dataclass(frozen=True)
class LecamCheck:
    lhs: float
    bound: float
    holds: bool


def _min_one_inverse(mu: float) -> float:
    # min(1, 1/mu), with the degenerate mu = 0 resolved to the min's first arm.
    return 1.0 if mu <= 1.0 else 1.0 / mu


def lecam_bound_check(probs, event: Iterable[int]) -> LecamCheck:
    """Check |Pr(C in A) - Pr(L in A)| <= min(1, 1/mu) * tau on an explicit event.

    C is the Poisson-binomial sum of the given Bernoulli probabilities, L is
    Poisson with the same mean mu = sum p_k, and tau = sum p_k^2.  Both sides
    are exact pmf sums.
    """
    probs = np.atleast_1d(np.asarray(probs, dtype=np.float64))
    event_set = {int(a) for a in event}
    if any(a < 0 for a in event_set):
        raise ValueError("event must contain non-negative integers")
    pmf = poisson_binomial_exact(probs)
    mu = float(probs.sum())
    tau = float((probs**2).sum())
    pr_c = float(sum(pmf[a] for a in event_set if a < pmf.size))
    pr_l = float(sum(poisson.pmf(a, mu) for a in event_set)) if event_set else 0.0
    lhs = abs(pr_c - pr_l)
    bound = _min_one_inverse(mu) * tau
    return LecamCheck(lhs=lhs, bound=bound, holds=bool(lhs <= bound + 1e-12))


@dataclass(frozen=True)
class SuccessConditionReport:
    """Evaluation of the bounded-error sufficient condition at one (mu, epsilon).

    ``lhs`` is the concentration term 2 e^{-P_s mu} (2 e P_s)^{mu/2} plus the
    Poisson-approximation term max_b min(1, 1/mu_b) * tau; the condition holds
    when lhs <= epsilon, in which case the translated protocol's success
    probability is at least p_alpha_lower_bound = 1 - lhs.
    """

    mu: float
    p_s: float
    epsilon: float
    lhs: float
    holds: bool
    p_alpha_lower_bound: float
    stats: ClickCountStats

    def __post_init__(self) -> None:
        if self.holds != (self.lhs <= self.epsilon):
            raise ValueError("holds flag inconsistent with lhs <= epsilon")
        if self.p_alpha_lower_bound > 1.0:
            raise ValueError("success lower bound cannot exceed 1")


def _concentration_term(p_s: float, mu: float) -> float:
    # 2 e^{-p_s mu} (2 e p_s)^{mu/2}, in log space; equals 2 at mu = 0.
    log_term = math.log(2.0) - p_s * mu + 0.5 * mu * (math.log(2.0 * p_s) + 1.0)
    return math.exp(log_term)


def check_success_condition(
    p_s: float,
    epsilon: float,
    mu: float,
    probs_qubit,
    partition: OutcomePartition,
) -> SuccessConditionReport:
    """Decide whether mean photon number mu preserves the bounded error.

    Args:
        p_s: success probability of the original protocol, in (1/2, 1]; must
            equal the probability mass of ``probs_qubit`` on S_0 (the correct
            outcome set), which is what the underlying derivation assumes.
        epsilon: target error bound, in (0, 1/2).
        mu: mean photon number |alpha|^2 of the translated protocol.
        probs_qubit: original outcome probabilities p_k over all modes,
            summing to 1.  Click probabilities are derived per mode as
            p_{alpha,k} = 1 - e^{-mu p_k}.
        partition: the two mode sets S_0 / S_1.

    Returns:
        A report with the condition's left-hand side, whether it holds, and
        the implied lower bound 1 - lhs on the translated success probability.
    """
    p_s = float(p_s)
    epsilon = float(epsilon)
    mu = float(mu)
    if not 0.5 < p_s <= 1.0:
        raise ValueError("p_s must lie in (1/2, 1]")
    if not 0.0 < epsilon < 0.5:
        raise ValueError("epsilon must lie in (0, 1/2)")
    if mu < 0.0:
        raise ValueError("mu must be non-negative")

    probs_qubit = np.atleast_1d(np.asarray(probs_qubit, dtype=np.float64))
    if np.any(probs_qubit < 0.0) or abs(probs_qubit.sum() - 1.0) > 1e-9:
        raise ValueError("probs_qubit must be non-negative and sum to 1")
    if partition.max_label > probs_qubit.size:
        raise ValueError("probs_qubit does not cover all partition mode labels")
    i0, i1 = partition.indices()
    mass0 = float(probs_qubit[i0].sum())
    if abs(mass0 - p_s) > 1e-9:
        raise ValueError(
            f"p_s = {p_s!r} must equal the S_0 probability mass {mass0!r}"
        )

    click_probs = -np.expm1(-mu * probs_qubit)
    p0, p1 = click_probs[i0], click_probs[i1]
    stats = ClickCountStats(
        mu0=float(p0.sum()),
        mu1=float(p1.sum()),
        tau0=float((p0**2).sum()),
        tau1=float((p1**2).sum()),
    )
    approx_term = max(_min_one_inverse(stats.mu0), _min_one_inverse(stats.mu1)) * stats.tau
    lhs = _concentration_term(p_s, mu) + approx_term
    return SuccessConditionReport(
        mu=mu,
        p_s=p_s,
        epsilon=epsilon,
        lhs=lhs,
        holds=bool(lhs <= epsilon),
        p_alpha_lower_bound=1.0 - lhs,
        stats=stats,
    )


def leading_block_partition(d0: int, d1: int) -> OutcomePartition:
    """S_0 = modes 1..d0, S_1 = modes d0+1..d0+d1."""
    return OutcomePartition(
        frozenset(range(1, d0 + 1)), frozenset(range(d0 + 1, d0 + d1 + 1))
    )


def two_block_trial_generator(
    d0: int, p_click_0: float, d1: int, p_click_1: float
) -> Callable[[np.random.Generator], ClickPattern]:
    """Trial generator for uniform click probability within each mode block.

    Per-set click counts of d independent Bernoulli modes with a common p are
    Binomial(d, p), so sampling the two counts and filling that many leading
    positions of each block reproduces the exact decision statistics of the
    full product-Bernoulli pattern (positions within a block are
    exchangeable for count-based decisions).
    """
    d = d0 + d1

    def generate(rng: np.random.Generator) -> ClickPattern:
        clicks = np.zeros(d, dtype=bool)
        if d0:
            clicks[: rng.binomial(d0, p_click_0)] = True
        if d1:
            clicks[d0 : d0 + rng.binomial(d1, p_click_1)] = True
        return ClickPattern(clicks)

    return generate


@dataclass(frozen=True)
class McEstimate:
    p_hat: float
    ci95: float
    trials: int
    successes: int
    ties: int


def estimate_success_probability(
    trial_generator: Callable[[np.random.Generator], ClickPattern],
    partition: OutcomePartition,
    trials: int,
    seed: Seed,
    tie_policy: str = "failure",
) -> McEstimate:
    """Monte Carlo success frequency of the click-count decision rule.

    The generator receives a per-trial generator (derived as seed.derive(t))
    and must return the click pattern of one protocol run whose correct
    answer is the S_0 outcome; a trial succeeds when :func:`decide` returns
    ZERO.  Ties count as failures by default ("failure"), matching the strict
    Pr(C_0 > C_1) success event; policy "coin" resolves each tie with a fair
    seeded coin flip instead.

    Returns the success frequency and its Wald 95% half-width.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if tie_policy not in ("failure", "coin"):
        raise ValueError(f"unknown tie policy {tie_policy!r}")
    successes = 0
    ties = 0
    for t in range(trials):
        rng = seed.derive(t).rng()
        pattern = trial_generator(rng)
        outcome = decide(pattern, partition)
        if outcome is Outcome.TIE:
            ties += 1
            if tie_policy == "coin":
                outcome = Outcome.ZERO if rng.random() < 0.5 else Outcome.ONE
        if outcome is Outcome.ZERO:
            successes += 1
    p_hat = successes / trials
    ci95 = 1.96 * math.sqrt(p_hat * (1.0 - p_hat) / trials)
    return McEstimate(p_hat=p_hat, ci95=ci95, trials=trials, successes=successes, ties=ties)
