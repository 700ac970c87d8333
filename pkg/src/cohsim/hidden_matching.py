"""Coherent-state protocol for the Hidden Matching problem.

Alice holds an n-bit string x (n even) and encodes it as one coherent state
per mode with amplitude (-1)^{x_i} * alpha / sqrt(n).  Bob holds a perfect
matching M on {1..n} and must output some pair (i, j) in M together with the
parity x_i XOR x_j.  He routes each matched pair of modes into a balanced
beam splitter; the "+" output port keeps all the light when the pair has
even parity and the "-" port when it has odd parity, while the other port is
exactly dark.  Any click therefore identifies a pair and its parity with
certainty, and the only failure mode is seeing no click anywhere, which
happens with probability e^{-|alpha|^2}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Seed, UnitaryOp
from .detection import ClickPattern, sample_click_pattern
from .mapping import ModeCoherentState, parse_bits, phase_encoded_state


@dataclass(frozen=True)
class Matching:
    """Perfect matching on {1..n}: every label appears in exactly one pair.

    Pairs are canonicalized on construction: each pair stored as (min, max)
    and pairs sorted by their smaller label.  This fixes one beam-splitter
    network per matching, independent of input order.
    """

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        canon = tuple(
            sorted((tuple(sorted((int(i), int(j)))) for i, j in self.pairs))
        )
        labels = [k for pair in canon for k in pair]
        n = len(labels)
        if n == 0 or n % 2 != 0:
            raise ValueError("matching must cover an even, positive number of modes")
        if sorted(labels) != list(range(1, n + 1)):
            raise ValueError(f"pairs must cover each label in 1..{n} exactly once")
        object.__setattr__(self, "pairs", canon)

    @property
    def n(self) -> int:
        return 2 * len(self.pairs)

    @classmethod
    def parse(cls, text: str) -> "Matching":
        """Parse the wire format 'i-j,i-j,...', e.g. '1-6,2-5,3-4'."""
        pairs = []
        for chunk in text.split(","):
            left, sep, right = chunk.partition("-")
            if not sep:
                raise ValueError(f"malformed pair {chunk!r}; expected 'i-j'")
            try:
                pairs.append((int(left), int(right)))
            except ValueError as exc:
                raise ValueError(f"malformed pair {chunk!r}: {exc}") from exc
        return cls(tuple(pairs))

    def format(self) -> str:
        return ",".join(f"{i}-{j}" for i, j in self.pairs)


def random_matching(n: int, rng: np.random.Generator) -> Matching:
    """Uniformly random perfect matching on {1..n}."""
    if n < 2 or n % 2 != 0:
        raise ValueError("n must be a positive even number")
    perm = rng.permutation(n) + 1
    pairs = tuple((int(perm[2 * t]), int(perm[2 * t + 1])) for t in range(n // 2))
    return Matching(pairs)


@dataclass(frozen=True, eq=False)
class HMResult:
    """Outcome of one protocol trial.

    Conclusive results carry the identified pair and its parity bit; a trial
    with no click anywhere is inconclusive.
    """

    conclusive: bool
    pair: tuple[int, int] | None
    parity_bit: int | None
    raw_pattern: ClickPattern

    def __post_init__(self) -> None:
        if self.conclusive:
            if self.pair is None or self.parity_bit not in (0, 1):
                raise ValueError("conclusive result needs a pair and a parity bit")
            if not self.raw_pattern.any_click:
                raise ValueError("conclusive result requires at least one click")


def alice_state(x, alpha: complex) -> ModeCoherentState:
    """Alice's encoding: mode i carries (-1)^{x_i} * alpha / sqrt(n)."""
    bits = parse_bits(x)
    if bits.size < 2:
        raise ValueError("input string must have at least 2 bits")
    return phase_encoded_state(bits, alpha)


def bob_unitary(m: Matching) -> UnitaryOp:
    """Beam-splitter network for a matching: pairwise balanced interference.

    For pair index t (1-based, pairs in canonical order) with labels (i, j),
    i < j, output port 2t-1 carries (a_i + a_j)/sqrt(2) and port 2t carries
    (a_i - a_j)/sqrt(2).
    """
    n = m.n
    mat = np.zeros((n, n), dtype=np.complex128)
    r = 1.0 / math.sqrt(2.0)
    for t, (i, j) in enumerate(m.pairs):
        mat[2 * t, i - 1] = r
        mat[2 * t, j - 1] = r
        mat[2 * t + 1, i - 1] = r
        mat[2 * t + 1, j - 1] = -r
    return UnitaryOp(mat)


def output_port_labels(m: Matching) -> tuple[tuple[tuple[int, int], int], ...]:
    """(pair, parity) meaning of each output port, in port order.

    Port 2t-1 (the "+" combination) signals parity 0 for pair t, port 2t
    (the "-" combination) signals parity 1.
    """
    labels: list[tuple[tuple[int, int], int]] = []
    for pair in m.pairs:
        labels.append((pair, 0))
        labels.append((pair, 1))
    return tuple(labels)


def run_trial(x, m: Matching, alpha: complex, seed: Seed) -> HMResult:
    """One protocol round: encode, interfere, threshold-detect, interpret.

    When several ports click, the lowest port index is reported; every
    clicking port corresponds to a correct (pair, parity) answer because the
    wrong-parity port of each pair has exactly zero amplitude.
    """
    state = alice_state(x, alpha)
    if state.dim != m.n:
        raise ValueError(f"input has {state.dim} bits but matching covers {m.n} modes")
    out = ModeCoherentState(bob_unitary(m).matrix @ state.mode_amplitudes, state.alpha)
    pattern = sample_click_pattern(out, seed)
    if not pattern.any_click:
        return HMResult(False, None, None, pattern)
    port = int(np.argmax(pattern.clicks))
    pair, parity = output_port_labels(m)[port]
    return HMResult(True, pair, parity, pattern)


@dataclass(frozen=True)
class TrialStats:
    """Aggregated Monte Carlo results of repeated protocol rounds."""

    trials: int
    conclusive_correct: int
    conclusive_wrong: int
    inconclusive: int
    x: str
    matching: str
    alpha_sq: float

    @property
    def inconclusive_rate(self) -> float:
        return self.inconclusive / self.trials

    @property
    def inconclusive_expected(self) -> float:
        """Closed form: all output ports dark at once, e^{-|alpha|^2}."""
        return math.exp(-self.alpha_sq)

    @property
    def inconclusive_ci95(self) -> float:
        q = self.inconclusive_rate
        return 1.96 * math.sqrt(q * (1.0 - q) / self.trials)


def run_experiment(
    n: int,
    matching: Matching | None,
    x,
    alpha: complex,
    trials: int,
    seed: Seed,
) -> TrialStats:
    """Run many seeded trials and tally correct / wrong / inconclusive.

    ``matching`` and/or ``x`` may be None, in which case they are drawn once
    per experiment from the seed.  Trial t uses seed.derive(t + 1), so the
    tally does not depend on execution order; the setup draw uses the seed
    itself.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    setup_rng = seed.rng()
    if matching is None:
        matching = random_matching(n, setup_rng)
    if matching.n != n:
        raise ValueError(f"matching covers {matching.n} modes, expected {n}")
    if x is None:
        bits = setup_rng.integers(0, 2, n).astype(np.uint8)
    else:
        bits = parse_bits(x)
        if bits.size != n:
            raise ValueError(f"input string has {bits.size} bits, expected {n}")

    state = alice_state(bits, alpha)
    out = ModeCoherentState(bob_unitary(matching).matrix @ state.mode_amplitudes, state.alpha)
    labels = output_port_labels(matching)
    truth = {pair: int(bits[pair[0] - 1] ^ bits[pair[1] - 1]) for pair in matching.pairs}

    correct = wrong = inconclusive = 0
    for t in range(trials):
        pattern = sample_click_pattern(out, seed.derive(t + 1))
        if not pattern.any_click:
            inconclusive += 1
            continue
        pair, parity = labels[int(np.argmax(pattern.clicks))]
        if parity == truth[pair]:
            correct += 1
        else:
            wrong += 1
    return TrialStats(
        trials=trials,
        conclusive_correct=correct,
        conclusive_wrong=wrong,
        inconclusive=inconclusive,
        x="".join(str(int(b)) for b in bits),
        matching=matching.format(),
        alpha_sq=float(abs(complex(alpha)) ** 2),
    )
