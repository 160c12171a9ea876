"""Density matrices: validation, seeded random generation, pure states.

Random states come from NumPy's ``PCG64`` bit generator seeded through
``numpy.random.default_rng(seed)``.  A ``dim x rank`` matrix ``G`` is drawn as
``standard_normal((dim, rank)) + 1j * standard_normal((dim, rank))`` (real block
first) and the state is ``G G^dagger / Tr[G G^dagger]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import NotPSD, QHTError, TraceNotOne, ZeroVector

TRACE_ATOL = 1e-10


@dataclass(frozen=True)
class Priors:
    pi0: float
    pi1: float

    def __post_init__(self):
        if not (0.0 < self.pi0 < 1.0 and 0.0 < self.pi1 < 1.0):
            raise QHTError(f"priors must lie in (0, 1), got ({self.pi0}, {self.pi1})")
        if abs(self.pi0 + self.pi1 - 1.0) > 1e-12:
            raise QHTError(f"priors must sum to 1, got {self.pi0 + self.pi1}")

    @classmethod
    def from_pi0(cls, pi0: float) -> "Priors":
        return cls(pi0, 1.0 - pi0)

    @classmethod
    def equal(cls) -> "Priors":
        return cls(0.5, 0.5)


def as_priors(priors) -> Priors:
    if isinstance(priors, Priors):
        return priors
    if np.isscalar(priors):
        return Priors.from_pi0(float(priors))
    pi0, pi1 = priors
    return Priors(float(pi0), float(pi1))


def validate_density(m) -> np.ndarray:
    """Check that ``m`` is a density matrix and return its Hermitized copy.

    Raises:
        NonHermitianInput, NotPSD, TraceNotOne
    """
    m = linalg.hermitize(linalg.check_hermitian(m))
    w = linalg.eigvalsh(m)
    tau = linalg.clamp_tolerance(w)
    if w[-1] < -tau:
        raise NotPSD(f"smallest eigenvalue {w[-1]:.3e}")
    tr = float(np.trace(m).real)
    if abs(tr - 1.0) > TRACE_ATOL:
        raise TraceNotOne(f"trace is {tr!r}")
    return m


def random_density(dim: int, rank: int | None = None, seed=0) -> np.ndarray:
    """Seeded Ginibre-type random state of the given rank.

    ``seed`` is anything ``default_rng`` accepts; passing a ``Generator``
    draws from it directly.
    """
    rank = dim if rank is None else rank
    if not 1 <= rank <= dim:
        raise QHTError(f"rank {rank} not in [1, {dim}]")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ g.conj().T
    m = 0.5 * (m + m.conj().T)
    return m / np.trace(m).real


def random_psd(dim: int, rank: int, seed, scale: float = 1.0) -> np.ndarray:
    """Unnormalized PSD matrix: ``scale`` times a random state."""
    return scale * random_density(dim, rank, seed)


def pure_state(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex).ravel()
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ZeroVector("cannot build a state from the zero vector")
    v = v / norm
    return np.outer(v, v.conj())


def diag_state(*entries: float) -> np.ndarray:
    return np.diag(np.asarray(entries, dtype=complex))
