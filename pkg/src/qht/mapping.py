"""Map a pair of density matrices to a pair of classical distributions.

For spectral decompositions ``rho = sum_i lam_i |x_i><x_i|`` and
``sigma = sum_j mu_j |y_j><y_j|`` the image is ``p_ij = lam_i |<x_i|y_j>|^2``,
``q_ij = mu_j |<x_i|y_j>|^2`` on ``d*d`` outcomes in row-major ``(i, j)`` order.
The map preserves ``Tr[rho^(1-s) sigma^s]`` and the relative entropy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DimensionMismatch, NotNormalized, OrthogonalHypotheses

PROB_TOL = 1e-12
NORM_ATOL = 1e-10


@dataclass(frozen=True)
class ClassicalPair:
    """Two distributions on a common finite outcome set.

    Entries outside a support are exactly zero, so ``p > 0`` and ``q > 0``
    are the supports ``D0`` and ``D1``.
    """

    p: np.ndarray
    q: np.ndarray
    outcomes: np.ndarray | None = None

    @property
    def d0(self) -> np.ndarray:
        return self.p > 0

    @property
    def d1(self) -> np.ndarray:
        return self.q > 0


@dataclass(frozen=True)
class ConditionalPair:
    """The pair conditioned on ``B = D0 & D1``; ``p_tilde``/``q_tilde`` live on ``B``."""

    base: ClassicalPair
    mask: np.ndarray
    psi0: float
    psi1: float
    p_tilde: np.ndarray
    q_tilde: np.ndarray


@dataclass(frozen=True)
class SpectralPair:
    """Clamped eigenvalues of both states and the squared eigenbasis overlaps."""

    lam: np.ndarray
    mu: np.ndarray
    overlap: np.ndarray
    rho_dec: linalg.SpectralDecomposition
    sigma_dec: linalg.SpectralDecomposition


def _same_dims(rho, sigma):
    rho = np.asarray(rho)
    sigma = np.asarray(sigma)
    if rho.shape != sigma.shape:
        raise DimensionMismatch(f"shapes {rho.shape} and {sigma.shape} differ")
    return rho, sigma


def spectral_pair(rho, sigma) -> SpectralPair:
    rho, sigma = _same_dims(rho, sigma)
    rd = linalg.eigh(rho)
    sd = linalg.eigh(sigma)
    lam = linalg.psd_eigenvalues(rd)
    mu = linalg.psd_eigenvalues(sd)
    overlap = np.abs(rd.eigenvectors.conj().T @ sd.eigenvectors) ** 2
    return SpectralPair(lam, mu, overlap, rd, sd)


def ns_map(rho, sigma) -> ClassicalPair:
    sp = spectral_pair(rho, sigma)
    d = sp.lam.shape[0]
    p = (sp.lam[:, None] * sp.overlap).ravel()
    q = (sp.overlap * sp.mu[None, :]).ravel()
    ii, jj = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    outcomes = np.stack([ii.ravel(), jj.ravel()], axis=1)
    return ClassicalPair(p, q, outcomes)


def classical_pair(p, q) -> ClassicalPair:
    """Validate two probability vectors and zero out entries below ``1e-12``.

    Raises:
        NotNormalized: if either vector has a negative entry or does not sum to 1.
    """
    p = np.asarray(p, dtype=float).ravel()
    q = np.asarray(q, dtype=float).ravel()
    if p.shape != q.shape:
        raise DimensionMismatch(f"lengths {p.size} and {q.size} differ")
    for name, v in (("p", p), ("q", q)):
        if np.any(v < -PROB_TOL) or abs(v.sum() - 1.0) > NORM_ATOL:
            raise NotNormalized(f"{name} is not a probability vector (sum {v.sum()!r})")
    p = np.where(p > PROB_TOL, p, 0.0)
    q = np.where(q > PROB_TOL, q, 0.0)
    return ClassicalPair(p, q)


def as_pair(p, q=None) -> ClassicalPair:
    if isinstance(p, ClassicalPair):
        return p
    return classical_pair(p, q)


def classical_q_s(pair: ClassicalPair, s):
    """``sum p^(1-s) q^s`` with ``0^0 = 0``; scalar in, scalar out."""
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    p, q = pair.p, pair.q
    with np.errstate(divide="ignore"):
        lp = np.where(p > 0, np.log(np.where(p > 0, p, 1.0)), 0.0)
        lq = np.where(q > 0, np.log(np.where(q > 0, q, 1.0)), 0.0)
    both = (p > 0) & (q > 0)
    out = np.empty_like(s_arr)
    for k, sk in enumerate(s_arr):
        if sk == 0.0:
            out[k] = p[q > 0].sum()
        elif sk == 1.0:
            out[k] = q[p > 0].sum()
        else:
            out[k] = np.exp((1.0 - sk) * lp[both] + sk * lq[both]).sum()
    return out if np.ndim(s) else float(out[0])


def classical_relent(p, q=None) -> float:
    """Natural-log relative entropy ``H(p||q)``; ``inf`` when ``p`` is not dominated by ``q``."""
    pair = as_pair(p, q)
    p, q = pair.p, pair.q
    if np.any((p > PROB_TOL) & (q <= 0)):
        return math.inf
    m = (p > 0) & (q > 0)
    return max(float(np.sum(p[m] * (np.log(p[m]) - np.log(q[m])))), 0.0)


def quantum_relent(rho, sigma) -> float:
    """Umegaki relative entropy ``Tr[rho (log rho - log sigma)]`` or ``inf``."""
    rho, sigma = _same_dims(rho, sigma)
    rd = linalg.eigh(rho)
    sd = linalg.eigh(sigma)
    outside = float(np.trace(rho @ (np.eye(rho.shape[0]) - linalg.support_projection(sigma, sd))).real)
    if outside > PROB_TOL:
        return math.inf
    lam = linalg.psd_eigenvalues(rd)
    pos = lam > 0
    neg_entropy = float(np.sum(lam[pos] * np.log(lam[pos])))
    cross = float(np.trace(rho @ linalg.matrix_log(sigma, sd)).real)
    return max(neg_entropy - cross, 0.0)


def conditionalize(pair: ClassicalPair) -> ConditionalPair:
    """Condition both distributions on the common support.

    Raises:
        OrthogonalHypotheses: if the common support carries no ``p`` mass.
    """
    mask = pair.d0 & pair.d1
    psi0 = min(float(pair.p[mask].sum()), 1.0)
    psi1 = min(float(pair.q[mask].sum()), 1.0)
    if psi0 <= PROB_TOL or psi1 <= PROB_TOL:
        raise OrthogonalHypotheses("the two hypotheses have disjoint supports")
    return ConditionalPair(pair, mask, psi0, psi1, pair.p[mask] / psi0, pair.q[mask] / psi1)
