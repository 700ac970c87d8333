"""Complex linear-algebra substrate: pure states, unitaries, seeded randomness.

States and operators are immutable value objects backed by numpy arrays, and
every operation is a pure function of its inputs.  Randomness is always routed
through an explicit :class:`Seed`, so trials can run concurrently and still
reproduce bit-identical results.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Tolerance for structural invariants (state norm, unitarity).
NORM_TOL = 1e-10
# Tolerance for checks on composed operations (products of ops accumulate error).
COMPOSED_TOL = 1e-9

_MAX_UINT64 = 2**64


class DimensionMismatchError(ValueError):
    """Raised when two objects act on different numbers of modes/basis states."""


def _check_same_dim(da: int, db: int, what: str) -> None:
    if da != db:
        raise DimensionMismatchError(f"incompatible {what}: dimensions {da} and {db}")


@dataclass(frozen=True)
class Seed:
    """Root of all randomness: (master_seed, trial_index) fixes every draw.

    Batch runners derive one child per trial via :meth:`derive`, which makes
    results independent of execution order.
    """

    master_seed: int
    trial_index: int = 0

    def __post_init__(self) -> None:
        if not 0 <= int(self.master_seed) < _MAX_UINT64:
            raise ValueError("master_seed must fit in an unsigned 64-bit integer")
        if int(self.trial_index) < 0:
            raise ValueError("trial_index must be non-negative")

    def derive(self, offset: int) -> "Seed":
        """Child seed for trial ``trial_index + offset``."""
        return Seed(self.master_seed, self.trial_index + offset)

    def rng(self) -> np.random.Generator:
        """Fresh generator determined entirely by (master_seed, trial_index)."""
        ss = np.random.SeedSequence([int(self.master_seed), int(self.trial_index)])
        return np.random.default_rng(ss)


def _as_complex_vector(values, name: str) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(values, dtype=np.complex128))
    if arr.ndim != 1:
        raise ValueError(f"{name} must be a one-dimensional vector")
    if arr.size < 1:
        raise ValueError(f"{name} must have at least one entry")
    return arr


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit vector of complex amplitudes over a canonical basis of dimension d."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = _as_complex_vector(self.amplitudes, "amplitudes")
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized: sum |amp|^2 = {norm_sq!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return int(self.amplitudes.size)


@dataclass(frozen=True, eq=False)
class UnitaryOp:
    """Dense d x d unitary matrix (U^dagger U = I entrywise within NORM_TOL)."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        mat = np.asarray(self.matrix, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 1:
            raise ValueError("matrix must be square and non-empty")
        deviation = np.max(np.abs(mat.conj().T @ mat - np.eye(mat.shape[0])))
        if deviation > NORM_TOL:
            raise ValueError(f"matrix is not unitary: max |U^H U - I| = {deviation!r}")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])


def normalized(amplitudes) -> PureState:
    """Build a PureState from an arbitrary non-zero amplitude vector."""
    arr = _as_complex_vector(amplitudes, "amplitudes")
    norm = float(np.linalg.norm(arr))
    if norm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return PureState(arr / norm)


def basis_state(d: int, k: int) -> PureState:
    """Canonical basis state labelled k, with k in 1..d (mode numbering)."""
    if d < 1:
        raise ValueError("dimension must be at least 1")
    if not 1 <= k <= d:
        raise ValueError(f"basis label {k} outside 1..{d}")
    amps = np.zeros(d, dtype=np.complex128)
    amps[k - 1] = 1.0
    return PureState(amps)


def uniform_state(d: int) -> PureState:
    """Equal-amplitude superposition over all d basis states."""
    if d < 1:
        raise ValueError("dimension must be at least 1")
    return PureState(np.full(d, 1.0 / np.sqrt(d), dtype=np.complex128))


def inner_product(a: PureState, b: PureState) -> complex:
    """<a|b> = sum_k conj(a_k) b_k."""
    _check_same_dim(a.dim, b.dim, "states")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def apply_unitary(u: UnitaryOp, s: PureState) -> PureState:
    """|s'> = U|s>."""
    _check_same_dim(u.dim, s.dim, "operator and state")
    return PureState(u.matrix @ s.amplitudes)


def random_state(d: int, seed: Seed) -> PureState:
    """State drawn uniformly from the complex unit sphere in dimension d."""
    if d < 1:
        raise ValueError("dimension must be at least 1")
    rng = seed.rng()
    vec = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(vec / np.linalg.norm(vec))


def random_unitary(d: int, seed: Seed) -> UnitaryOp:
    """Haar-distributed unitary: QR of a complex Ginibre matrix, phases fixed.

    Multiplying Q by the phases of diag(R) makes the decomposition unique and
    the resulting distribution exactly Haar.
    """
    if d < 1:
        raise ValueError("dimension must be at least 1")
    rng = seed.rng()
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    q = q * (diag / np.abs(diag))
    return UnitaryOp(q)
