"""Randomized checks of the inequalities behind the error exponents.

Every check draws its trials from ``default_rng([seed, trial])``, so a report
depends only on ``(seed, trials, dims)`` and not on how many worker threads
evaluate the trials.  A trial's margin is oriented so that ``>= 0`` means the
inequality holds; it counts as a failure below ``-1e-9``.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import kernels, linalg
from .chernoff import chernoff_distance, fidelity, q_s_curve, trace_distance
from .mapping import spectral_pair
from .states import diag_state, pure_state, random_density

FAIL_THRESHOLD = -1e-9
S_GRID = np.linspace(0.0, 1.0, 21)
MIX_WEIGHTS = (0.25, 0.5, 0.75)
NORM_TOL = 1e-10


@dataclass(frozen=True)
class VerificationReport:
    property_name: str
    trials: int
    worst_margin: float
    failures: int
    seed: int

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


def _random_state(rng, dim: int, deficient: bool) -> np.ndarray:
    rank = int(rng.integers(1, dim)) if deficient and dim > 1 else dim
    return random_density(dim, rank, rng)


def _random_pair(rng, dims) -> tuple[np.ndarray, np.ndarray]:
    """Two states of a random dimension; half the time one or both are rank-deficient."""
    dim = int(dims[rng.integers(len(dims))])
    deficient = rng.random() < 0.5
    which = int(rng.integers(3)) if deficient else -1
    rho = _random_state(rng, dim, which in (0, 2))
    sigma = _random_state(rng, dim, which in (1, 2))
    return rho, sigma


def _random_scale(rng) -> float:
    return float(np.exp(rng.uniform(-2.0, 2.0)))


def _run(name: str, trial_fn: Callable, trials: int, seed: int, dims, workers: int) -> VerificationReport:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    dims = tuple(int(d) for d in dims)

    def one(t: int) -> float:
        return float(trial_fn(_trial_rng(seed, t), dims))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            margins = list(pool.map(one, range(trials)))
    else:
        margins = [one(t) for t in range(trials)]
    return VerificationReport(
        property_name=name,
        trials=trials,
        worst_margin=min(margins),
        failures=sum(m < FAIL_THRESHOLD for m in margins),
        seed=seed,
    )


# --------------------------------------------------------------------------
# individual margins, usable on fixed inputs
# --------------------------------------------------------------------------

def trace_inequality_margins(a, b, s_values=S_GRID) -> np.ndarray:
    """``Tr[a^s b^(1-s)] - Tr[a + b - |a - b|] / 2`` for each ``s``."""
    sp = spectral_pair(b, a)
    lhs = kernels.q_s_spectral(sp.lam, sp.mu, sp.overlap, s_values)
    a = np.asarray(a)
    b = np.asarray(b)
    rhs = 0.5 * (np.trace(a).real + np.trace(b).real - linalg.trace_norm(a - b))
    return lhs - rhs


def chain_margins(rho, sigma) -> dict[str, float]:
    """Margins of ``1-sqrt(1-F^2) <= 1-T <= Q <= F <= sqrt(1-T^2)`` and ``F^2 <= Q``."""
    f = fidelity(rho, sigma)
    t = trace_distance(rho, sigma)
    q = chernoff_distance(rho, sigma).q_star
    return {
        "fuchs_lower": (1.0 - t) - (1.0 - math.sqrt(max(1.0 - f * f, 0.0))),
        "q_lower": q - (1.0 - t),
        "q_upper": f - q,
        "fuchs_upper": math.sqrt(max(1.0 - t * t, 0.0)) - f,
        "f_squared": q - f * f,
    }


def holder_margins(a, b, s_values=S_GRID) -> np.ndarray:
    """``(Tr[A^s B^(1-s)])^(1/2) Tr[A]^((1-s)/2) Tr[B]^(s/2) - ||A^(1/2) B^(1/2)||_1``."""
    a = np.asarray(a)
    b = np.asarray(b)
    lhs = float(np.sum(np.linalg.svd(linalg.matrix_power(a, 0.5) @ linalg.matrix_power(b, 0.5), compute_uv=False)))
    sp = spectral_pair(b, a)
    q = kernels.q_s_spectral(sp.lam, sp.mu, sp.overlap, s_values)
    s = np.asarray(s_values, dtype=float)
    tr_a, tr_b = np.trace(a).real, np.trace(b).real
    return np.sqrt(q) * tr_a ** ((1.0 - s) / 2.0) * tr_b ** (s / 2.0) - lhs


def norm_affinity_margin(a, b) -> float:
    """``(Tr(A+B))^2 - ||A-B||_1^2 - 4 (Tr[A^(1/2) B^(1/2)])^2``."""
    a = np.asarray(a)
    b = np.asarray(b)
    total = np.trace(a + b).real
    affinity = float(np.trace(linalg.matrix_power(a, 0.5) @ linalg.matrix_power(b, 0.5)).real)
    return float(total**2 - linalg.trace_norm(a - b) ** 2 - 4.0 * affinity**2)


def convexity_margin(rho, sigma, points: int = 101) -> float:
    """Smallest ``(Q_(s-h) + Q_(s+h))/2 - Q_s`` over a uniform grid."""
    q = q_s_curve(rho, sigma, np.linspace(0.0, 1.0, points))
    return float(np.min(0.5 * (q[:-2] + q[2:]) - q[1:-1]))


def joint_concavity_margin(rho1, sigma1, rho2, sigma2, t: float) -> float:
    q = lambda r, s: chernoff_distance(r, s).q_star  # noqa: E731
    mixed = q(t * rho1 + (1 - t) * rho2, t * sigma1 + (1 - t) * sigma2)
    return mixed - (t * q(rho1, sigma1) + (1 - t) * q(rho2, sigma2))


def partial_trace_margin(rho, sigma, dims=(2, 2)) -> float:
    """``Q(Tr_B rho, Tr_B sigma) - Q(rho, sigma)``; non-negative by monotonicity."""
    small = chernoff_distance(linalg.partial_trace(rho, "B", dims), linalg.partial_trace(sigma, "B", dims))
    return small.q_star - chernoff_distance(rho, sigma).q_star


# --------------------------------------------------------------------------
# suites
# --------------------------------------------------------------------------

def _trace_inequality_trial(rng, dims) -> float:
    rho, sigma = _random_pair(rng, dims)
    a = _random_scale(rng) * rho
    b = _random_scale(rng) * sigma
    return float(np.min(trace_inequality_margins(a, b)))


def _chain_trial(rng, dims) -> float:
    rho, sigma = _random_pair(rng, dims)
    return min(chain_margins(rho, sigma).values())


def _norm_bounds_trial(rng, dims) -> float:
    rho, sigma = _random_pair(rng, dims)
    a = _random_scale(rng) * rho
    b = _random_scale(rng) * sigma
    return min(float(np.min(holder_margins(a, b))), norm_affinity_margin(a, b))


def _pure_tightness_trial(rng, dims) -> float:
    dim = int(dims[rng.integers(len(dims))])
    rho = random_density(dim, 1, rng)
    sigma = _random_state(rng, dim, rng.random() < 0.5)
    f = fidelity(rho, sigma)
    return -abs(f * f - chernoff_distance(rho, sigma).q_star)


def _convexity_trial(rng, dims) -> float:
    rho1, sigma1 = _random_pair(rng, dims)
    dim = rho1.shape[0]
    rho2 = _random_state(rng, dim, rng.random() < 0.5)
    sigma2 = _random_state(rng, dim, rng.random() < 0.5)
    margins = [convexity_margin(rho1, sigma1)]
    margins += [joint_concavity_margin(rho1, sigma1, rho2, sigma2, t) for t in MIX_WEIGHTS]
    big_rho, big_sigma = _random_pair(rng, (4,))
    margins.append(partial_trace_margin(big_rho, big_sigma))
    return min(margins)


def check_trace_inequality(trials: int = 1000, seed: int = 0, dims=(2, 3), workers: int = 1) -> VerificationReport:
    """``Tr[a^s b^(1-s)] >= Tr[a + b - |a - b|] / 2`` on random scaled PSD pairs, 21 values of ``s``."""
    return _run("trace_inequality", _trace_inequality_trial, trials, seed, dims, workers)


def check_chain(trials: int = 1000, seed: int = 0, dims=(2, 3), workers: int = 1) -> VerificationReport:
    """Every link of the fidelity / trace distance / ``Q`` chain, plus ``F^2 <= Q``."""
    return _run("chain", _chain_trial, trials, seed, dims, workers)


def check_norm_bounds(trials: int = 1000, seed: int = 0, dims=(2, 3, 4, 5), workers: int = 1) -> VerificationReport:
    """Hoelder-type bound on ``||A^(1/2) B^(1/2)||_1`` and the norm/affinity bound, unnormalized inputs."""
    return _run("norm_bounds", _norm_bounds_trial, trials, seed, dims, workers)


def check_pure_tightness(trials: int = 1000, seed: int = 0, dims=(2, 3), workers: int = 1) -> VerificationReport:
    """``F^2 = Q`` when the first state is pure; the margin is ``-|F^2 - Q|``."""
    return _run("pure_tightness", _pure_tightness_trial, trials, seed, dims, workers)


def check_convexity_concavity(trials: int = 1000, seed: int = 0, dims=(2, 3), workers: int = 1) -> VerificationReport:
    """Convexity of ``Q_s`` in ``s``, joint concavity of ``Q`` and monotonicity under partial trace."""
    return _run("convexity_concavity", _convexity_trial, trials, seed, dims, workers)


def tensor_counterexample_values(b: float = 0.35) -> dict[str, float]:
    """Trace norms of one and two copies, and Chernoff distances, for the diagonal qubit pairs.

    The pairs are ``diag(1/4, 3/4)`` vs ``diag(3/4, 1/4)`` and ``diag(0, 1)`` vs ``diag(b, 1-b)``.
    """
    rho, sigma = diag_state(0.25, 0.75), diag_state(0.75, 0.25)
    rho_p, sigma_p = diag_state(0.0, 1.0), diag_state(b, 1.0 - b)
    two = lambda m: linalg.tensor_power(m, 2)  # noqa: E731
    return {
        "norm_1": linalg.trace_norm(rho - sigma),
        "norm_1_primed": linalg.trace_norm(rho_p - sigma_p),
        "norm_2": linalg.trace_norm(two(rho) - two(sigma)),
        "norm_2_primed": linalg.trace_norm(two(rho_p) - two(sigma_p)),
        "xi": chernoff_distance(rho, sigma).xi_qcb,
        "xi_primed": chernoff_distance(rho_p, sigma_p).xi_qcb,
    }


def tensor_counterexample_margins(b: float = 0.35) -> dict[str, float]:
    """Margins for the closed-form norms and, when ``1 - 1/sqrt 2 < b < 1/2``, the order reversals."""
    v = tensor_counterexample_values(b)
    expected = {"norm_1": 1.0, "norm_1_primed": 2 * b, "norm_2": 1.0, "norm_2_primed": 2 * b * (2 - b)}
    margins = {k: NORM_TOL - abs(v[k] - e) for k, e in expected.items()}
    if 1.0 - 1.0 / math.sqrt(2.0) < b < 0.5:
        margins["one_copy_order"] = v["norm_1"] - v["norm_1_primed"]
        margins["two_copy_order"] = v["norm_2_primed"] - v["norm_2"]
        margins["rate_order"] = v["xi_primed"] - v["xi"]
    return margins


def check_tensor_counterexample(b: float = 0.35) -> VerificationReport:
    """One deterministic trial: worst of the margins from :func:`tensor_counterexample_margins`."""
    margins = tensor_counterexample_margins(b)
    worst = min(margins.values())
    return VerificationReport("tensor_counterexample", 1, worst, int(worst < 0.0), 0)


def sharpness_gap(t: float) -> float:
    """``|Q + T - 1|`` for ``|0><0|`` vs ``(1-t)|0><0| + t|1><1|``, where ``T = t``.

    Here ``Q_s = (1-t)^s``, so ``Q_s + T >= 1`` is tight at the minimizer ``s = 1``.
    """
    rho = pure_state([1.0, 0.0])
    sigma = diag_state(1.0 - t, t)
    return abs(chernoff_distance(rho, sigma).q_star + trace_distance(rho, sigma) - 1.0)


SUITES: dict[str, Callable[..., VerificationReport]] = {
    "trace_inequality": check_trace_inequality,
    "chain": check_chain,
    "norm_bounds": check_norm_bounds,
    "pure_tightness": check_pure_tightness,
    "convexity_concavity": check_convexity_concavity,
}


def run_suite(name: str, trials: int = 1000, seed: int = 0, dims=None, workers: int = 1) -> list[VerificationReport]:
    """Run one named suite, ``tensor_counterexample``, or ``all`` of them in a fixed order."""
    if name == "all":
        names = list(SUITES) + ["tensor_counterexample"]
    elif name in SUITES or name == "tensor_counterexample":
        names = [name]
    else:
        raise KeyError(f"unknown suite {name!r}")
    reports = []
    for n in names:
        if n == "tensor_counterexample":
            reports.append(check_tensor_counterexample())
        elif dims is None:
            reports.append(SUITES[n](trials, seed, workers=workers))
        else:
            reports.append(SUITES[n](trials, seed, dims, workers))
    return reports
