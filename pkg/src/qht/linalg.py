"""Dense Hermitian linear algebra on top of LAPACK ``eigh``.

Every spectral routine Hermitizes its input first, and all support decisions
(positive range, support projection, clamping before fractional powers) share
one threshold, see :func:`clamp_tolerance`.
"""

from __future__ import annotations

import os
from typing import NamedTuple

import numpy as np

from .errors import (
    DimensionCapExceeded,
    DimensionMismatch,
    NegativeEigenvalue,
    NonHermitianInput,
)

HERMITIAN_ATOL = 1e-12
DEFAULT_DIM_CAP = 4096


class SpectralDecomposition(NamedTuple):
    """Eigenvalues in descending order and the matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def dim_cap() -> int:
    """Tensor-space dimension cap, overridable through ``QHT_DIM_CAP``."""
    raw = os.environ.get("QHT_DIM_CAP")
    if raw is None or raw.strip() == "":
        return DEFAULT_DIM_CAP
    return int(raw)


def _as_square(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    return m


def check_hermitian(m) -> np.ndarray:
    m = _as_square(m)
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    dev = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    if dev > HERMITIAN_ATOL * scale:
        raise NonHermitianInput(f"matrix deviates from Hermitian by {dev:.3e}")
    return m


def hermitize(m) -> np.ndarray:
    m = _as_square(m)
    return 0.5 * (m + m.conj().T)


def clamp_tolerance(eigenvalues: np.ndarray) -> float:
    """Support threshold ``dim * 1e-12 * max|eigenvalue|``."""
    if eigenvalues.size == 0:
        return 0.0
    return eigenvalues.size * 1e-12 * float(np.max(np.abs(eigenvalues)))


def eigh(m) -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian matrix, eigenvalues descending.

    Raises:
        NonHermitianInput: if ``m`` is not Hermitian within ``1e-12``
            (relative to its largest entry once that exceeds one).
    """
    m = hermitize(check_hermitian(m))
    w, v = np.linalg.eigh(m)
    return SpectralDecomposition(w[::-1].copy(), v[:, ::-1].copy())


def eigvalsh(m) -> np.ndarray:
    m = hermitize(check_hermitian(m))
    return np.linalg.eigvalsh(m)[::-1].copy()


def _spectral_apply(dec: SpectralDecomposition, values: np.ndarray) -> np.ndarray:
    v = dec.eigenvectors
    return (v * values) @ v.conj().T


def psd_eigenvalues(dec: SpectralDecomposition) -> np.ndarray:
    """Eigenvalues with everything at or below the support threshold set to 0.

    Raises:
        NegativeEigenvalue: if an eigenvalue lies below ``-tau``.
    """
    w = dec.eigenvalues
    tau = clamp_tolerance(w)
    if w.size and w[-1] < -tau:
        raise NegativeEigenvalue(f"eigenvalue {w[-1]:.3e} below -{tau:.3e}")
    return np.where(w > tau, w, 0.0)


def scalar_power(x: np.ndarray, t: float) -> np.ndarray:
    """``x**t`` for non-negative ``x`` with ``0**0 == 0`` (support convention)."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] ** t
    return out


def matrix_power(m, t: float, dec: SpectralDecomposition | None = None) -> np.ndarray:
    """Fractional power ``m**t`` of a PSD matrix for ``0 <= t <= 1``.

    At ``t == 0`` the result is the support projection, so ``s -> Tr[rho^(1-s) sigma^s]``
    stays continuous at both ends of ``[0, 1]``.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"exponent {t} outside [0, 1]")
    if dec is None:
        dec = eigh(m)
    w = psd_eigenvalues(dec)
    return _spectral_apply(dec, scalar_power(w, t))


def matrix_log(m, dec: SpectralDecomposition | None = None) -> np.ndarray:
    """Logarithm restricted to the support; zero on the kernel."""
    if dec is None:
        dec = eigh(m)
    w = psd_eigenvalues(dec)
    logs = np.zeros_like(w)
    logs[w > 0] = np.log(w[w > 0])
    return _spectral_apply(dec, logs)


def positive_part(m) -> np.ndarray:
    """``(|m| + m) / 2``; the negative part is ``positive_part(-m)``."""
    dec = eigh(m)
    return _spectral_apply(dec, np.where(dec.eigenvalues > 0, dec.eigenvalues, 0.0))


def jordan_parts(m) -> tuple[np.ndarray, np.ndarray]:
    """Positive and negative parts from a single decomposition."""
    dec = eigh(m)
    w = dec.eigenvalues
    return (
        _spectral_apply(dec, np.where(w > 0, w, 0.0)),
        _spectral_apply(dec, np.where(w < 0, -w, 0.0)),
    )


def range_projector(m, dec: SpectralDecomposition | None = None) -> np.ndarray:
    """Projector onto the eigenvectors with eigenvalue above the threshold."""
    if dec is None:
        dec = eigh(m)
    tau = clamp_tolerance(dec.eigenvalues)
    keep = dec.eigenvalues > tau
    v = dec.eigenvectors[:, keep]
    return v @ v.conj().T


def support_projection(m, dec: SpectralDecomposition | None = None) -> np.ndarray:
    if dec is None:
        dec = eigh(m)
    w = psd_eigenvalues(dec)
    v = dec.eigenvectors[:, w > 0]
    return v @ v.conj().T


def trace_norm(m) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.sum(np.abs(eigvalsh(m))))


def kron(a, b) -> np.ndarray:
    return np.kron(np.asarray(a), np.asarray(b))


def tensor_power(m, n: int, cap: int | None = None) -> np.ndarray:
    """``m`` tensored with itself ``n`` times.

    Raises:
        DimensionCapExceeded: if ``dim**n`` exceeds ``cap`` (default :func:`dim_cap`).
    """
    m = np.asarray(m)
    if n < 1:
        raise ValueError("tensor power needs n >= 1")
    cap = dim_cap() if cap is None else cap
    if m.shape[0] ** n > cap:
        raise DimensionCapExceeded(f"dimension {m.shape[0]}**{n} exceeds cap {cap}")
    out = m
    for _ in range(n - 1):
        out = np.kron(out, m)
    return out


def partial_trace(m, which: str, dims: tuple[int, int]) -> np.ndarray:
    """Trace out subsystem ``"A"`` or ``"B"`` of an operator on ``A (x) B``."""
    m = np.asarray(m)
    da, db = dims
    if m.shape != (da * db, da * db):
        raise DimensionMismatch(f"shape {m.shape} does not match dims {dims}")
    t = m.reshape(da, db, da, db)
    if which == "B":
        return np.einsum("ajbj->ab", t)
    if which == "A":
        return np.einsum("iaib->ab", t)
    raise ValueError(f"subsystem must be 'A' or 'B', got {which!r}")
