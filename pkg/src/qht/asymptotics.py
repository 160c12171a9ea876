"""Exact n-copy computations and finite-n checks of the asymptotic bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels, linalg
from .chernoff import ChernoffResult, chernoff_distance
from .discrimination import _projector_errors
from .errors import DimensionCapExceeded, InfiniteExponentRegion, SupportTooLarge
from .hoeffding import e_quantum
from .mapping import ns_map, spectral_pair
from .optimize import golden_section_minimize
from .states import Priors, as_priors

UNDERFLOW_FLOOR = 1e-300
BOUND_SLACK = 1e-10
MAX_SUPPORT = 16
LIMIT_S = 1.0 - 1e-6


@dataclass(frozen=True)
class RateEntry:
    n: int
    value: float
    rate: float | None
    upper_bound: float
    lower_bound: float

    @property
    def sandwich_ok(self) -> bool:
        return (
            self.lower_bound <= self.value + BOUND_SLACK
            and self.value <= self.upper_bound + BOUND_SLACK
        )


@dataclass(frozen=True)
class RateExperiment:
    entries: list[RateEntry]
    chernoff: ChernoffResult

    @property
    def all_sandwich_ok(self) -> bool:
        return all(e.sandwich_ok for e in self.entries)


@dataclass(frozen=True)
class HoeffdingTestResult:
    """Errors of the n-copy projector test built for exponent ``r``.

    ``log_alpha_bound`` and ``log_beta_bound`` are the logs of the closed-form
    bounds ``Q_s^n e^(-n x s)`` and ``Q_s^n e^(n x (1-s))``.
    """

    n: int
    r: float
    s: float
    x: float
    alpha: float
    beta: float
    log_alpha_bound: float
    log_beta_bound: float

    @property
    def bounds_hold(self) -> bool:
        return (
            self.alpha <= math.exp(self.log_alpha_bound) + BOUND_SLACK
            and self.beta <= math.exp(self.log_beta_bound) + BOUND_SLACK
        )


def _check_cap(dim: int, n: int):
    cap = linalg.dim_cap()
    if dim**n > cap:
        raise DimensionCapExceeded(f"{dim}**{n} = {dim**n} exceeds cap {cap}")


def _is_diagonal(m) -> bool:
    m = np.asarray(m)
    return not np.any(m - np.diag(np.diag(m)))


def _diag_tensor_power(d: np.ndarray, n: int) -> np.ndarray:
    out = d
    for _ in range(n - 1):
        out = np.kron(out, d)
    return out


def n_copy_error(rho, sigma, priors=Priors.equal(), n: int = 1) -> float:
    """Optimal Bayesian error ``(1 - ||pi1 sigma^n - pi0 rho^n||_1) / 2`` for ``n`` copies."""
    pr = as_priors(priors)
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    _check_cap(rho.shape[0], n)
    if _is_diagonal(rho) and _is_diagonal(sigma):
        r = _diag_tensor_power(np.diag(rho).real, n)
        s = _diag_tensor_power(np.diag(sigma).real, n)
        return float(np.minimum(pr.pi0 * r, pr.pi1 * s).sum())
    diff = pr.pi1 * linalg.tensor_power(sigma, n) - pr.pi0 * linalg.tensor_power(rho, n)
    return max(0.5 * (1.0 - linalg.trace_norm(diff)), 0.0)


def type_class_ml_error(p, q, eta0: float, eta1: float, n: int) -> float:
    """``sum_x min(eta0 p^n(x), eta1 q^n(x))`` summed by type class.

    Raises:
        SupportTooLarge: if more than 16 outcomes carry mass.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    keep = (p > 0) | (q > 0)
    if keep.sum() > MAX_SUPPORT:
        raise SupportTooLarge(f"{keep.sum()} outcomes exceed the limit of {MAX_SUPPORT}")
    return kernels.type_class_min_sum(p[keep], q[keep], eta0, eta1, n)


def log_upper_bound(sp, priors: Priors, n: int) -> float:
    """``log min_s pi0^(1-s) pi1^s Q_s^n``, minimized by golden section (convex in s)."""
    lp0, lp1 = math.log(priors.pi0), math.log(priors.pi1)

    def g(s: float) -> float:
        qs = float(kernels.q_s_spectral(sp.lam, sp.mu, sp.overlap, s)[0])
        if qs <= 0:
            return -math.inf
        return (1.0 - s) * lp0 + s * lp1 + n * math.log(qs)

    _, inner = golden_section_minimize(g, 0.0, 1.0, 1e-10)
    return min(inner, g(0.0), g(1.0))


def chernoff_rate_experiment(rho, sigma, priors=Priors.equal(), n_max: int = 10) -> RateExperiment:
    """Exact ``P*_{e,n}`` for ``n = 1..n_max`` with its finite-n sandwich.

    Each entry carries ``1/2`` of the classical ML error of the mapped pair
    (lower bound) and ``min_s pi0^(1-s) pi1^s Q_s^n`` (upper bound).
    """
    pr = as_priors(priors)
    rho = np.asarray(rho, dtype=complex)
    _check_cap(rho.shape[0], n_max)
    sp = spectral_pair(rho, sigma)
    pair = ns_map(rho, sigma)
    entries = []
    for n in range(1, n_max + 1):
        value = n_copy_error(rho, sigma, pr, n)
        rate = -math.log(value) / n if value > UNDERFLOW_FLOOR else None
        upper = math.exp(log_upper_bound(sp, pr, n))
        lower = 0.5 * type_class_ml_error(pair.p, pair.q, pr.pi0, pr.pi1, n)
        entries.append(RateEntry(n, value, rate, upper, lower))
    return RateExperiment(entries, chernoff_distance(rho, sigma))


def hoeffding_test(rho, sigma, r: float, n: int) -> HoeffdingTestResult:
    """Build the test ``Pi_n = range projector of (e^(-n x) sigma^n - rho^n)_+``.

    ``s`` is the achiever of ``e_Q(r)`` (``1 - 1e-6`` when the supremum is only
    reached as ``s -> 1``) and ``x = -(r + log Q_s) / (1 - s)``, which makes the
    type-II bound exactly ``e^(-n r)``.

    Raises:
        InfiniteExponentRegion: if ``e_Q(r)`` is infinite.
        DimensionCapExceeded: if ``dim**n`` exceeds the cap.
    """
    if r <= 0:
        raise ValueError("r must be positive")
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    _check_cap(rho.shape[0], n)
    point = e_quantum(rho, sigma, r)
    if point.is_infinite:
        raise InfiniteExponentRegion(f"e_Q({r}) is infinite; a zero-alpha test exists")
    s = LIMIT_S if point.s_achieving is None else point.s_achieving
    sp = spectral_pair(rho, sigma)
    log_q = math.log(float(kernels.q_s_spectral(sp.lam, sp.mu, sp.overlap, s)[0]))
    s = float(s)
    x = -(r + log_q) / (1.0 - s)
    rho_n = linalg.tensor_power(rho, n)
    sigma_n = linalg.tensor_power(sigma, n)
    _, alpha, beta = _projector_errors(math.exp(-n * x) * sigma_n - rho_n, rho_n, sigma_n)
    return HoeffdingTestResult(
        n=n,
        r=r,
        s=s,
        x=x,
        alpha=alpha,
        beta=beta,
        log_alpha_bound=n * (-x * s + log_q),
        log_beta_bound=n * (x * (1.0 - s) + log_q),
    )
