"""Chernoff-type quantities built on ``Q_s = Tr[rho^(1-s) sigma^s]``.

``Q_s`` is convex in ``s`` on ``[0, 1]``, so its minimum is found by
golden-section search without derivatives; this also covers rank-deficient
states, where ``Q_s`` need not be differentiable at the endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from scipy.optimize import brentq

from . import kernels, linalg
from .errors import NotFaithful, SOutOfRange
from .mapping import PROB_TOL, SpectralPair, spectral_pair
from .optimize import golden_section_minimize

S_TOL = 1e-10
ENDPOINT_SNAP = 1e-8
CURVE_POINTS = 101
POLISH_WINDOW = 1e-6


@dataclass(frozen=True)
class ChernoffResult:
    q_star: float
    xi_qcb: float
    s_star: float
    curve: list[tuple[float, float]] = field(repr=False)


@dataclass(frozen=True)
class ArcPoint:
    s: float
    spectrum: np.ndarray
    rel_ent_to_rho: float
    rel_ent_to_sigma: float


def _q_eval(sp: SpectralPair, s):
    return kernels.q_s_spectral(sp.lam, sp.mu, sp.overlap, s)


def q_s(rho, sigma, s: float) -> float:
    """``Tr[rho^(1-s) sigma^s]``; ``Q_0 = Tr[rho supp sigma]``, ``Q_1 = Tr[sigma supp rho]``."""
    if not 0.0 <= s <= 1.0:
        raise SOutOfRange(f"s = {s} outside [0, 1]")
    return float(_q_eval(spectral_pair(rho, sigma), s)[0])


def q_s_curve(rho, sigma, s_values) -> np.ndarray:
    return _q_eval(spectral_pair(rho, sigma), s_values)


def spectral_derivative(sp: SpectralPair, s: float) -> float:
    """``dQ_s/ds = sum lam_i^(1-s) mu_j^s C_ij (log mu_j - log lam_i)`` for ``0 < s < 1``."""
    li = sp.lam > 0
    mj = sp.mu > 0
    lam, mu, c = sp.lam[li], sp.mu[mj], sp.overlap[np.ix_(li, mj)]
    terms = np.outer(lam ** (1.0 - s), mu**s) * c * (np.log(mu)[None, :] - np.log(lam)[:, None])
    return float(terms.sum())


def _polish(sp: SpectralPair, s: float) -> float:
    # Q_s is flat to O(ds^2) at the minimum, so values alone pin s only to ~1e-8;
    # the sign change of the derivative pins it to machine precision.
    lo, hi = max(s - POLISH_WINDOW, 1e-15), min(s + POLISH_WINDOW, 1.0 - 1e-15)
    g_lo, g_hi = spectral_derivative(sp, lo), spectral_derivative(sp, hi)
    if g_lo < 0.0 < g_hi:
        return brentq(lambda t: spectral_derivative(sp, t), lo, hi, xtol=1e-15)
    return s


def minimize_q(sp: SpectralPair) -> tuple[float, float]:
    """Return ``(s_star, Q_{s_star})`` for a prepared spectral pair."""
    f = lambda s: float(_q_eval(sp, s)[0])  # noqa: E731
    s_in, q_in = golden_section_minimize(f, 0.0, 1.0, S_TOL)
    s_pol = _polish(sp, s_in)
    q_pol = f(s_pol)
    if q_pol <= q_in:
        s_in, q_in = s_pol, q_pol
    q0, q1 = f(0.0), f(1.0)
    s_star, q_star = s_in, q_in
    if s_in <= ENDPOINT_SNAP and q0 <= q_in:
        s_star, q_star = 0.0, q0
    elif s_in >= 1.0 - ENDPOINT_SNAP and q1 <= q_in:
        s_star, q_star = 1.0, q1
    return s_star, q_star


def chernoff_distance(rho, sigma) -> ChernoffResult:
    """Quantum Chernoff distance ``-log min_s Q_s`` with its minimizer and a sampled curve.

    Orthogonal states give ``q_star = 0`` and ``xi_qcb = inf``.
    """
    sp = spectral_pair(rho, sigma)
    grid = np.linspace(0.0, 1.0, CURVE_POINTS)
    curve = [(float(s), float(v)) for s, v in zip(grid, _q_eval(sp, grid))]
    overlap = float(np.trace(np.asarray(rho) @ np.asarray(sigma)).real)
    if overlap <= PROB_TOL:
        return ChernoffResult(0.0, math.inf, 0.5, curve)
    s_star, q_star = minimize_q(sp)
    xi = -math.log(q_star) if q_star > PROB_TOL else math.inf
    return ChernoffResult(q_star, xi, s_star, curve)


def _require_faithful(dec: linalg.SpectralDecomposition, name: str):
    w = linalg.psd_eigenvalues(dec)
    if np.any(w <= 0):
        raise NotFaithful(f"{name} is not full rank")


def _operator_pieces(rho, sigma, s):
    rd = linalg.eigh(rho)
    sd = linalg.eigh(sigma)
    _require_faithful(rd, "rho")
    _require_faithful(sd, "sigma")
    prod = linalg.matrix_power(rho, 1.0 - s, rd) @ linalg.matrix_power(sigma, s, sd)
    log_rho = linalg.matrix_log(rho, rd)
    log_sigma = linalg.matrix_log(sigma, sd)
    return rd, sd, prod, log_rho, log_sigma


def q_s_derivative(rho, sigma, s: float) -> float:
    """``d/ds Q_s = Tr[rho^(1-s) sigma^s log sigma] - Tr[rho^(1-s) sigma^s log rho]``.

    Raises:
        NotFaithful: unless both states have full rank.
    """
    if not 0.0 <= s <= 1.0:
        raise SOutOfRange(f"s = {s} outside [0, 1]")
    _, _, prod, log_rho, log_sigma = _operator_pieces(rho, sigma, s)
    return float(np.trace(prod @ log_sigma).real - np.trace(prod @ log_rho).real)


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity ``||rho^(1/2) sigma^(1/2)||_1``."""
    prod = linalg.matrix_power(rho, 0.5) @ linalg.matrix_power(sigma, 0.5)
    return float(np.sum(np.linalg.svd(prod, compute_uv=False)))


def trace_distance(rho, sigma) -> float:
    return 0.5 * linalg.trace_norm(np.asarray(rho) - np.asarray(sigma))


def hellinger_arc(rho, sigma, s: float) -> ArcPoint:
    """Point ``rho_s = rho^(1-s) sigma^s / Q_s`` on the quantum Hellinger arc.

    ``rho_s`` is not Hermitian; its spectrum is read from the similar
    Hermitian matrix ``rho^((1-s)/2) sigma^s rho^((1-s)/2) / Q_s``.
    """
    if not 0.0 < s < 1.0:
        raise SOutOfRange(f"s = {s} outside (0, 1)")
    rd, sd, prod, log_rho, log_sigma = _operator_pieces(rho, sigma, s)
    half = linalg.matrix_power(rho, 0.5 * (1.0 - s), rd)
    sym = half @ linalg.matrix_power(sigma, s, sd) @ half
    qs = float(np.trace(prod).real)
    spectrum = np.clip(linalg.eigvalsh(sym / qs), 0.0, None)
    entropy_term = float(np.sum(spectrum[spectrum > 0] * np.log(spectrum[spectrum > 0])))
    cross_rho = float(np.trace(prod @ log_rho).real) / qs
    cross_sigma = float(np.trace(prod @ log_sigma).real) / qs
    return ArcPoint(s, spectrum, entropy_term - cross_rho, entropy_term - cross_sigma)
