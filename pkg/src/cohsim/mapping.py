"""Coherent-state mapping of qubit protocols onto optical modes.

A qubit-protocol state |psi> = sum_k lambda_k |k> of dimension d becomes a
tensor product of d coherent states with per-mode amplitudes alpha*lambda_k.
Unitaries act directly on the amplitude vector (linear optics keeps products
of coherent states coherent), and a canonical-basis measurement becomes one
threshold detector per mode.

Alongside the translation itself this module provides the analytic quantities
used to reason about such protocols:

* ``overlap_coherent``: the overlap law delta_alpha = exp[|alpha|^2 (delta-1)]
  relating the qubit-state overlap delta to the coherent-version overlap.
* ``transmitted_info``: information accounting, log2 of the state-space
  dimension.
* ``effective_dimension_bound`` / ``poisson_tail_bound``: the total photon
  number is Poisson with mean |alpha|^2, so the states live (up to a small
  tail probability) in the span of Fock states with photon number within a
  window Delta of the mean; the dimension of that span grows only like a
  polynomial in d, keeping the log-dimension O(log2 d).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import PureState, UnitaryOp, _check_same_dim

# Mode power must reproduce |alpha|^2 to this absolute tolerance.
MODE_POWER_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ModeCoherentState:
    """Product of coherent states over d modes with amplitudes alpha*lambda_k.

    ``alpha`` is the global amplitude: the mean total photon number is
    |alpha|^2 and equals the summed per-mode power.
    """

    mode_amplitudes: np.ndarray
    alpha: complex

    def __post_init__(self) -> None:
        amps = np.atleast_1d(np.asarray(self.mode_amplitudes, dtype=np.complex128))
        if amps.ndim != 1 or amps.size < 1:
            raise ValueError("mode_amplitudes must be a non-empty vector")
        power = float(np.sum(np.abs(amps) ** 2))
        mu = float(abs(complex(self.alpha)) ** 2)
        if abs(power - mu) > MODE_POWER_TOL:
            raise ValueError(
                f"mode power {power!r} does not match |alpha|^2 = {mu!r}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "mode_amplitudes", amps)
        object.__setattr__(self, "alpha", complex(self.alpha))

    @classmethod
    def from_amplitudes(cls, mode_amplitudes) -> "ModeCoherentState":
        """Build a state from bare amplitudes, taking alpha = sqrt(total power)."""
        amps = np.atleast_1d(np.asarray(mode_amplitudes, dtype=np.complex128))
        power = float(np.sum(np.abs(amps) ** 2))
        return cls(amps, complex(math.sqrt(power)))

    @property
    def dim(self) -> int:
        return int(self.mode_amplitudes.size)

    @property
    def mean_photon_number(self) -> float:
        """mu = |alpha|^2, the mean of the (Poisson) total photon number."""
        return float(abs(self.alpha) ** 2)

    @property
    def per_mode_mean_photons(self) -> np.ndarray:
        return np.abs(self.mode_amplitudes) ** 2


def map_state(s: PureState, alpha: complex) -> ModeCoherentState:
    """Translate a qubit-protocol state: mode k carries amplitude alpha*lambda_k."""
    return ModeCoherentState(complex(alpha) * s.amplitudes, complex(alpha))


def map_unitary_apply(u: UnitaryOp, c: ModeCoherentState) -> ModeCoherentState:
    """Apply a linear-optics unitary: the amplitude vector transforms as U v.

    |alpha| is preserved because U preserves the vector norm.
    """
    _check_same_dim(u.dim, c.dim, "operator and coherent state")
    return ModeCoherentState(u.matrix @ c.mode_amplitudes, c.alpha)


def parse_bits(bits) -> np.ndarray:
    """Normalize a bit string ('0110'), list, or array into a uint8 array."""
    if isinstance(bits, str):
        if not bits or any(ch not in "01" for ch in bits):
            raise ValueError(f"bit string must be non-empty over {{0,1}}: {bits!r}")
        return np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
    arr = np.atleast_1d(np.asarray(bits))
    if arr.size < 1 or not np.all(np.isin(arr, (0, 1))):
        raise ValueError("bits must be a non-empty sequence of 0/1 values")
    return arr.astype(np.uint8)


def phase_encoded_state(bits, alpha: complex) -> ModeCoherentState:
    """Binary phase encoding: mode i carries (-1)^{bits_i} * alpha / sqrt(n).

    This is the coherent-state translation of the n-dimensional sign state
    (1/sqrt(n)) sum_i (-1)^{bits_i} |i>, used both by the hidden-matching
    sender and as the signature-key encoding.
    """
    b = parse_bits(bits)
    n = b.size
    signs = 1.0 - 2.0 * b.astype(np.float64)
    amps = signs * (complex(alpha) / math.sqrt(n))
    return ModeCoherentState(amps, complex(alpha))


def overlap_coherent(delta: complex, alpha: complex) -> complex:
    """Overlap of the coherent versions of two states with overlap delta.

    Equals exp[|alpha|^2 (delta - 1)]; derived by multiplying the per-mode
    coherent overlaps and using the normalization of both state vectors.
    """
    delta = complex(delta)
    if abs(delta) > 1.0 + 1e-10:
        raise ValueError(f"|delta| must be <= 1, got {abs(delta)!r}")
    mu = float(abs(complex(alpha)) ** 2)
    return complex(np.exp(mu * (delta - 1.0)))


def solve_alpha_for_overlap(delta: float, target_delta_alpha: float) -> float:
    """Mean photon number |alpha|^2 making the coherent overlap hit a target.

    Inverts exp[mu (delta - 1)] = target for real delta in (0, 1) and target
    in (0, 1): mu = ln(target) / (delta - 1).
    """
    delta = float(delta)
    target = float(target_delta_alpha)
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie strictly in (0, 1), got {delta!r}")
    if not 0.0 < target < 1.0:
        raise ValueError(f"target overlap must lie strictly in (0, 1), got {target!r}")
    return math.log(target) / (delta - 1.0)


def transmitted_info(d: int) -> float:
    """Transmitted information in bits: log2 of the state-space dimension."""
    if d < 1:
        raise ValueError("dimension must be at least 1")
    return math.log2(d)


def poisson_tail_bound(mu: float, delta: float) -> float:
    """Upper bound on P(|N - mu| >= delta) for N ~ Poisson(mu).

    Returns min(1, 2 e^{-mu} (e mu / (mu + delta))^{mu + delta}), evaluated in
    log space.  The raw expression exceeds 1 for small windows, hence the
    clamp; it is a probability bound either way.
    """
    mu = float(mu)
    delta = float(delta)
    if mu < 0.0:
        raise ValueError("mu must be non-negative")
    if delta <= 0.0:
        raise ValueError("delta must be positive")
    if mu == 0.0:
        return 0.0
    log_raw = math.log(2.0) - mu + (mu + delta) * (1.0 + math.log(mu) - math.log(mu + delta))
    if log_raw >= 0.0:
        return 1.0
    return math.exp(log_raw)


@dataclass(frozen=True)
class DimensionBound:
    """Effective-dimension certificate for a photon-number window of half-width delta.

    ``d_alpha_upper`` bounds the dimension of the span of Fock states over d
    modes whose total photon number lies within delta of the mean, and
    ``tail_probability_upper`` bounds the probability of falling outside that
    window.
    """

    delta: int
    d_alpha_upper: int
    log2_d_alpha_upper: float
    tail_probability_upper: float

    def __post_init__(self) -> None:
        if self.d_alpha_upper < 1:
            raise ValueError("d_alpha_upper must be at least 1")
        if not 0.0 <= self.tail_probability_upper <= 1.0:
            raise ValueError("tail_probability_upper must lie in [0, 1]")


def effective_dimension_bound(mu: float, delta: int, d: int) -> DimensionBound:
    """Bound the dimension of the effectively occupied state space.

    Photon numbers n in the window give at most 2*delta values of n, and each
    n contributes a span of dimension C(n + d - 1, d - 1), maximal at the top
    of the window.  For non-integer mu the top of the window is taken as
    floor(mu) + delta (a conservative integer photon count):

        d_alpha_upper = 2 * delta * C(floor(mu) + delta + d - 1, d - 1)

    The log2 value is computed through log-gamma so the sweep never overflows,
    and the tail probability comes from :func:`poisson_tail_bound`.
    """
    mu = float(mu)
    delta = int(delta)
    d = int(d)
    if mu < 0.0:
        raise ValueError("mu must be non-negative")
    if delta < 1:
        raise ValueError("delta must be a positive integer")
    if d < 1:
        raise ValueError("dimension must be at least 1")

    n_top = math.floor(mu) + delta + d - 1
    k = d - 1
    d_upper = 2 * delta * math.comb(n_top, k)
    log2_upper = math.log2(2 * delta) + (
        math.lgamma(n_top + 1) - math.lgamma(k + 1) - math.lgamma(n_top - k + 1)
    ) / math.log(2.0)
    tail = poisson_tail_bound(mu, float(delta)) if mu > 0.0 else 0.0
    return DimensionBound(
        delta=delta,
        d_alpha_upper=d_upper,
        log2_d_alpha_upper=log2_upper,
        tail_probability_upper=tail,
    )
