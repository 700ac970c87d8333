"""Threshold detection and photon-number statistics of mode coherent states.

The measurement model is one ideal threshold detector per mode (unit
efficiency, no dark counts): "click" is the complement of the vacuum
projection, so mode k of a coherent product state clicks independently with
probability 1 - exp(-|amplitude_k|^2).

Photon counts, when needed, are exact: mode k carries Poisson(|amplitude_k|^2)
photons independently, which makes the total Poisson(|alpha|^2).  The same
joint count law arises from a Poisson-distributed number of repetitions of
the single-photon protocol, each repetition landing in mode k with the
original outcome probability |lambda_k|^2; ``multinomial_oracle`` and
``poissonized_repetition_oracle`` are the brute-force reference
implementations of that equivalence used by the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import PureState, Seed
from .mapping import ModeCoherentState

# Poisson sampling switches from CDF inversion to the generator's own method
# above this mean; desk-scale per-mode means stay far below it.
_POISSON_INVERSION_CUTOFF = 30.0

# Refuse to enumerate photon-number records beyond this many compositions.
_MAX_ENUMERATION = 2_000_000


@dataclass(frozen=True, eq=False)
class ClickPattern:
    """Boolean outcome of one threshold measurement, one entry per mode."""

    clicks: np.ndarray

    def __post_init__(self) -> None:
        arr = np.atleast_1d(np.asarray(self.clicks, dtype=bool))
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("clicks must be a non-empty boolean vector")
        arr.setflags(write=False)
        object.__setattr__(self, "clicks", arr)

    @property
    def dim(self) -> int:
        return int(self.clicks.size)

    @property
    def any_click(self) -> bool:
        return bool(self.clicks.any())

    @property
    def total_clicks(self) -> int:
        return int(self.clicks.sum())


@dataclass(frozen=True, eq=False)
class PhotonRecord:
    """Per-mode photon counts from one counting measurement."""

    counts: np.ndarray
    total: int

    def __post_init__(self) -> None:
        arr = np.atleast_1d(np.asarray(self.counts, dtype=np.int64))
        if arr.ndim != 1 or arr.size < 1 or np.any(arr < 0):
            raise ValueError("counts must be a non-empty vector of non-negative integers")
        if int(arr.sum()) != int(self.total):
            raise ValueError("total must equal the sum of per-mode counts")
        arr.setflags(write=False)
        object.__setattr__(self, "counts", arr)
        object.__setattr__(self, "total", int(self.total))

    @classmethod
    def from_counts(cls, counts) -> "PhotonRecord":
        arr = np.atleast_1d(np.asarray(counts, dtype=np.int64))
        return cls(arr, int(arr.sum()))

    @property
    def dim(self) -> int:
        return int(self.counts.size)

    def as_clicks(self) -> ClickPattern:
        """Threshold view of the counts: click in mode k iff count_k >= 1."""
        return ClickPattern(self.counts >= 1)


def click_probabilities(c: ModeCoherentState) -> np.ndarray:
    """Per-mode click probability p_k = 1 - exp(-|amplitude_k|^2)."""
    return -np.expm1(-c.per_mode_mean_photons)


def sample_click_pattern(c: ModeCoherentState, seed: Seed) -> ClickPattern:
    """One threshold measurement: modes click independently with p_k."""
    probs = click_probabilities(c)
    rng = seed.rng()
    return ClickPattern(rng.random(c.dim) < probs)


def _sample_poisson(rng: np.random.Generator, means: np.ndarray) -> np.ndarray:
    """Independent Poisson draws, by CDF inversion for small means.

    Inversion consumes exactly one uniform per variate, which keeps trial
    streams simple and reproducible; large means fall back to the generator.
    """
    means = np.atleast_1d(np.asarray(means, dtype=np.float64))
    counts = np.zeros(means.shape, dtype=np.int64)
    small = means < _POISSON_INVERSION_CUTOFF
    if np.any(small):
        m = means[small]
        u = rng.random(m.shape)
        pmf = np.exp(-m)
        cdf = pmf.copy()
        out = np.zeros(m.shape, dtype=np.int64)
        k = 0
        # Walk all lagging modes forward together; runaway loop impossible
        # because the uniform is < 1 and the CDF converges to 1.
        while np.any(active := u > cdf):
            k += 1
            if k > 10_000:
                raise RuntimeError("Poisson inversion failed to converge")
            pmf = pmf * m / k
            cdf = cdf + pmf
            out[active] += 1
        counts[small] = out
    if np.any(~small):
        counts[~small] = rng.poisson(means[~small])
    return counts


def sample_photon_numbers(c: ModeCoherentState, seed: Seed) -> PhotonRecord:
    """Exact photon counts: mode k draws Poisson(|amplitude_k|^2) independently."""
    rng = seed.rng()
    counts = _sample_poisson(rng, c.per_mode_mean_photons)
    return PhotonRecord.from_counts(counts)


def photon_count_probability(c: ModeCoherentState, counts) -> float:
    """Exact probability of a full count record under the product-Poisson law."""
    counts = np.atleast_1d(np.asarray(counts, dtype=np.int64))
    if counts.size != c.dim:
        raise ValueError("record length does not match the mode count")
    if np.any(counts < 0):
        raise ValueError("counts must be non-negative")
    means = c.per_mode_mean_photons
    log_p = 0.0
    for m, n in zip(means, counts):
        if m == 0.0:
            if n > 0:
                return 0.0
            continue
        log_p += -m + n * math.log(m) - math.lgamma(n + 1)
    return math.exp(log_p)


def _compositions(n: int, d: int):
    """Yield all ways to place n photons into d modes, as count tuples."""
    if d == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _compositions(n - first, d - 1):
            yield (first,) + rest


def multinomial_oracle(s: PureState, n: int) -> dict[tuple[int, ...], float]:
    """Exact count distribution for n photons in the single-photon mode of s.

    Returns {record: probability} over every composition of n into d modes,
    with Pr(n_1, ..., n_d) = n! / (n_1! ... n_d!) * prod_k |lambda_k|^{2 n_k};
    this is also the tally law of n independent canonical-basis measurements
    of s.  Keys are plain count tuples.
    """
    if n < 0:
        raise ValueError("photon number must be non-negative")
    d = s.dim
    n_records = math.comb(n + d - 1, d - 1)
    if n_records > _MAX_ENUMERATION:
        raise ValueError(
            f"enumeration of {n_records} records exceeds the cap {_MAX_ENUMERATION}"
        )
    probs = np.abs(s.amplitudes) ** 2
    out: dict[tuple[int, ...], float] = {}
    for record in _compositions(n, d):
        coeff = math.factorial(n)
        p = 1.0
        for n_k, p_k in zip(record, probs):
            coeff //= math.factorial(n_k)
            p *= p_k**n_k
        out[record] = coeff * p
    return out


def poissonized_repetition_oracle(s: PureState, mu: float, seed: Seed) -> PhotonRecord:
    """Sample counts as N ~ Poisson(mu) repetitions of the single-photon protocol.

    Each of the N repetitions lands in mode k with probability |lambda_k|^2;
    the per-mode tallies are returned.  The joint law is identical to
    :func:`sample_photon_numbers` on the mapped state with |alpha|^2 = mu.
    """
    if mu < 0.0:
        raise ValueError("mu must be non-negative")
    rng = seed.rng()
    n = int(_sample_poisson(rng, np.array([mu]))[0])
    probs = np.abs(s.amplitudes) ** 2
    counts = rng.multinomial(n, probs / probs.sum())
    return PhotonRecord.from_counts(counts)
