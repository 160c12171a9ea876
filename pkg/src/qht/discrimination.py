"""Single-shot binary discrimination: Holevo-Helstrom and Neyman-Pearson tests.

A test is the projector ``Pi`` that accepts the alternative ``sigma``; its
type-I error is ``alpha = Tr[Pi rho]`` and its type-II error is
``beta = Tr[(1 - Pi) sigma]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DimensionMismatch, NotNormalized
from .mapping import NORM_ATOL
from .states import Priors, as_priors


@dataclass(frozen=True)
class TestOutcome:
    projector: np.ndarray
    alpha: float
    beta: float
    bayes_error: float

    __test__ = False  # not a pytest class


def _errors(proj, rho, sigma) -> tuple[float, float]:
    proj = np.asarray(proj)
    rho = np.asarray(rho)
    sigma = np.asarray(sigma)
    if not (proj.shape == rho.shape == sigma.shape):
        raise DimensionMismatch(f"shapes {proj.shape}, {rho.shape}, {sigma.shape} differ")
    alpha = float(np.trace(proj @ rho).real)
    beta = float(np.trace((np.eye(proj.shape[0]) - proj) @ sigma).real)
    return alpha, beta


def _projector_errors(diff, rho, sigma):
    """Range projector of ``diff`` plus errors read off both eigenspaces.

    Both errors come from their own eigenvector block so that a tiny ``beta``
    is not lost to cancellation in ``1 - Tr[Pi sigma]``.
    """
    dec = linalg.eigh(diff)
    tau = linalg.clamp_tolerance(dec.eigenvalues)
    keep = dec.eigenvalues > tau
    vp = dec.eigenvectors[:, keep]
    vn = dec.eigenvectors[:, ~keep]
    alpha = float(np.einsum("ik,ij,jk->", vp.conj(), rho, vp).real)
    beta = float(np.einsum("ik,ij,jk->", vn.conj(), sigma, vn).real)
    return vp @ vp.conj().T, max(alpha, 0.0), max(beta, 0.0)


def helstrom(rho, sigma, priors=Priors.equal()) -> TestOutcome:
    """Optimal Bayesian test: projector onto the positive range of ``pi1 sigma - pi0 rho``."""
    pr = as_priors(priors)
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape != sigma.shape:
        raise DimensionMismatch(f"shapes {rho.shape} and {sigma.shape} differ")
    diff = pr.pi1 * sigma - pr.pi0 * rho
    proj, alpha, beta = _projector_errors(diff, rho, sigma)
    bayes = 0.5 * (1.0 - linalg.trace_norm(diff))
    return TestOutcome(proj, alpha, beta, bayes)


def neyman_pearson(rho, sigma, threshold: float) -> tuple[TestOutcome, float]:
    """Test minimizing ``alpha + T beta`` for ``T = threshold``.

    Returns the outcome (its ``bayes_error`` is taken under the priors
    ``(1, T) / (1 + T)``) and the optimal value ``T - Tr[(T sigma - rho)_+]``.
    """
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape != sigma.shape:
        raise DimensionMismatch(f"shapes {rho.shape} and {sigma.shape} differ")
    diff = threshold * sigma - rho
    proj, alpha, beta = _projector_errors(diff, rho, sigma)
    value = threshold - float(np.trace(linalg.positive_part(diff)).real)
    pi0 = 1.0 / (1.0 + threshold)
    outcome = TestOutcome(proj, alpha, beta, pi0 * alpha + (1.0 - pi0) * beta)
    return outcome, value


def classical_ml_error(p, q, eta0: float, eta1: float) -> float:
    """Minimal weighted classical error ``sum_i min(eta0 p_i, eta1 q_i)``."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    for name, v in (("p", p), ("q", q)):
        if abs(v.sum() - 1.0) > NORM_ATOL or np.any(v < -NORM_ATOL):
            raise NotNormalized(f"{name} is not a probability vector")
    return float(np.minimum(eta0 * p, eta1 * q).sum())


def quantum_error_of_test(proj, rho, sigma, eta0: float, eta1: float) -> tuple[float, float, float]:
    """``(alpha, beta, eta0 alpha + eta1 beta)`` for any ``0 <= proj <= 1``."""
    alpha, beta = _errors(proj, rho, sigma)
    return alpha, beta, eta0 * alpha + eta1 * beta
