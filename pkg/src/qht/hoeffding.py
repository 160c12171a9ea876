"""Hoeffding error-exponent functions for classical and quantum hypothesis pairs.

``e(r) = sup_{0 <= s < 1} (-r s - log Q_s) / (1 - s)`` is the best type-I
exponent compatible with a type-II exponent of at least ``r``.  For pairs with
different supports the supremum is evaluated on the pair conditioned on the
common support ``B``:

    e(r) = -log psi0 + e~(r + log psi1)     for r >= -log psi1
    e(r) = inf                              for r <  -log psi1

where ``psi0 = p(B)``, ``psi1 = q(B)`` and ``e~`` is the exponent of the
conditional pair, whose ``log Q~_s`` is finite on all of ``[0, 1]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels, linalg
from .errors import ConsistencyError
from .mapping import (
    PROB_TOL,
    ClassicalPair,
    as_pair,
    classical_relent,
    conditionalize,
    ns_map,
    quantum_relent,
    spectral_pair,
)
from .optimize import golden_section_maximize

GRID_POINTS = 2001
S_MAX = 1.0 - 1e-9
REFINE_TOL = 1e-12
CROSS_CHECK_ATOL = 1e-9


@dataclass(frozen=True)
class ExponentPoint:
    """One point of an exponent curve.

    ``s_achieving`` is ``None`` when the value is infinite or when the
    supremum is only reached in the limit ``s -> 1``.
    """

    r: float
    value: float
    s_achieving: float | None

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.value)


@dataclass(frozen=True)
class CriticalPoints:
    """Support overlaps and pseudo-entropies that shape ``e_Q``.

    ``s_sigma_rho`` is ``S_sigma(rho||sigma) = H(p~||q)``, where the plateau at
    ``-log psi0`` starts; ``s_rho_sigma`` is ``S_rho(sigma||rho) = H(q~||p)``,
    the value of ``e_Q`` at ``r = -log psi1``.
    """

    psi0: float
    psi1: float
    s_sigma_rho: float
    s_rho_sigma: float


def _sup_conditional(pt: np.ndarray, qt: np.ndarray, rprime: float) -> tuple[float, float | None]:
    grid = np.linspace(0.0, S_MAX, GRID_POINTS)
    vals = kernels.exponent_values(pt, qt, rprime, grid)
    k = int(np.argmax(vals))
    best, s_best = float(vals[k]), float(grid[k])
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, GRID_POINTS - 1)]
    f = lambda s: float(kernels.exponent_values(pt, qt, rprime, s)[0])  # noqa: E731
    s_ref, v_ref = golden_section_maximize(f, lo, hi, REFINE_TOL)
    if v_ref > best:
        best, s_best = v_ref, s_ref
    if rprime <= PROB_TOL:
        # s -> 1 limit of (-r s - log Q~_s)/(1-s) is H(q~||p~) at r = 0, -inf otherwise
        limit = float(np.sum(qt * (np.log(qt) - np.log(pt))))
        if limit > best:
            return float(limit), None
    return max(best, 0.0), float(s_best)


def exponent_from_pair(pair: ClassicalPair, r: float) -> ExponentPoint:
    """Evaluate ``e(r)`` for a prepared classical pair.

    Raises:
        OrthogonalHypotheses: if the supports do not intersect.
    """
    if r < 0:
        raise ValueError("r must be non-negative")
    cp = conditionalize(pair)
    log_psi1 = math.log(cp.psi1)
    if cp.psi1 < 1.0 and r < -log_psi1 - PROB_TOL:
        return ExponentPoint(r, math.inf, None)
    rprime = max(r + log_psi1, 0.0)
    tilde, s = _sup_conditional(cp.p_tilde, cp.q_tilde, rprime)
    value = -math.log(cp.psi0) + tilde
    if -1e-12 < value < 0:
        value = 0.0
    return ExponentPoint(r, max(value, 0.0) + 0.0, s)


def e_classical(p, q, r: float) -> ExponentPoint:
    return exponent_from_pair(as_pair(p, q), r)


def e_s_value(log_q: float, r: float, s: float) -> float:
    """The linear function ``(-r s - log Q_s) / (1 - s)`` whose upper envelope is ``e``."""
    return (-r * s - log_q) / (1.0 - s)


def _cross_check(sp, point: ExponentPoint):
    if point.is_infinite or point.s_achieving is None:
        return
    s = point.s_achieving
    q_direct = float(kernels.q_s_spectral(sp.lam, sp.mu, sp.overlap, s)[0])
    lhs = -point.r * s - math.log(q_direct)
    rhs = (1.0 - s) * point.value
    if abs(lhs - rhs) > CROSS_CHECK_ATOL:
        raise ConsistencyError(
            f"direct and mapped exponent disagree at r={point.r}: {lhs!r} vs {rhs!r}"
        )


def e_quantum(rho, sigma, r: float) -> ExponentPoint:
    """Quantum exponent ``e_Q(r)``, computed on the mapped classical pair.

    The supremum is taken classically; the value at the achieving ``s`` is
    re-derived from ``Tr[rho^(1-s) sigma^s]`` directly and must agree.
    """
    sp = spectral_pair(rho, sigma)
    point = exponent_from_pair(ns_map(rho, sigma), r)
    _cross_check(sp, point)
    return point


def hoeffding_curve(rho, sigma, r_min: float, r_max: float, steps: int) -> list[ExponentPoint]:
    if r_min < 0 or r_max < r_min:
        raise ValueError("need 0 <= r_min <= r_max")
    if steps < 2:
        raise ValueError("steps must be at least 2")
    sp = spectral_pair(rho, sigma)
    pair = ns_map(rho, sigma)
    points = []
    for r in np.linspace(r_min, r_max, steps):
        point = exponent_from_pair(pair, float(r))
        _cross_check(sp, point)
        points.append(point)
    return points


def curve_shape_violations(points: list[ExponentPoint]) -> tuple[float, float]:
    """Largest increase and largest concavity defect over the finite part of a curve.

    The concavity defect is measured with the three-point divided difference,
    so it works on non-uniform grids.  Both numbers are ``<= 0`` for a
    non-increasing convex curve.
    """
    finite = [(pt.r, pt.value) for pt in points if not pt.is_infinite]
    if len(finite) < 2:
        return 0.0, 0.0
    r = np.array([x for x, _ in finite])
    v = np.array([y for _, y in finite])
    increase = float(np.max(np.diff(v)))
    if len(finite) < 3:
        return increase, 0.0
    lerp = v[:-2] + (v[2:] - v[:-2]) * (r[1:-1] - r[:-2]) / (r[2:] - r[:-2])
    return increase, float(np.max(v[1:-1] - lerp))


def _pseudo_entropy_operator(a, b, a_dec, b_dec, psi) -> float:
    """``Tr[(a/psi)(log(a/psi) - log b) supp b]`` with logs taken on supports."""
    w = linalg.psd_eigenvalues(a_dec)
    f = np.zeros_like(w)
    pos = w > 0
    f[pos] = w[pos] * np.log(w[pos] / psi)
    v = a_dec.eigenvectors
    a_log_a = (v * f) @ v.conj().T
    supp_b = linalg.support_projection(b, b_dec)
    term1 = float(np.trace(a_log_a @ supp_b).real)
    term2 = float(np.trace(np.asarray(a) @ linalg.matrix_log(b, b_dec)).real)
    return (term1 - term2) / psi


def critical_points(rho, sigma) -> CriticalPoints:
    """Overlaps ``psi0``, ``psi1`` and both pseudo-entropies, computed two ways.

    The classical route (through the mapped pair) is returned; the operator
    formulas must agree with it to ``1e-9``.

    Raises:
        OrthogonalHypotheses: for orthogonal states.
        ConsistencyError: if the two routes disagree.
    """
    cp = conditionalize(ns_map(rho, sigma))
    q_on_b = cp.base.q[cp.mask]
    p_on_b = cp.base.p[cp.mask]
    h_pt_q = float(np.sum(cp.p_tilde * (np.log(cp.p_tilde) - np.log(q_on_b))))
    h_qt_p = float(np.sum(cp.q_tilde * (np.log(cp.q_tilde) - np.log(p_on_b))))

    rd = linalg.eigh(rho)
    sd = linalg.eigh(sigma)
    psi0_op = float(np.trace(np.asarray(rho) @ linalg.support_projection(sigma, sd)).real)
    psi1_op = float(np.trace(np.asarray(sigma) @ linalg.support_projection(rho, rd)).real)
    op_s = _pseudo_entropy_operator(rho, sigma, rd, sd, psi0_op)
    op_r = _pseudo_entropy_operator(sigma, rho, sd, rd, psi1_op)
    for name, a, b in (
        ("psi0", cp.psi0, psi0_op),
        ("psi1", cp.psi1, psi1_op),
        ("S_sigma(rho||sigma)", h_pt_q, op_s),
        ("S_rho(sigma||rho)", h_qt_p, op_r),
    ):
        if abs(a - b) > CROSS_CHECK_ATOL:
            raise ConsistencyError(f"{name}: mapped {a!r} vs operator {b!r}")
    return CriticalPoints(cp.psi0, cp.psi1, h_pt_q, h_qt_p)


def stein_rate(rho, sigma) -> float:
    """Optimal type-II exponent at fixed type-I error: ``S(rho||sigma)``."""
    return quantum_relent(rho, sigma)


def classical_stein_rate(p, q) -> float:
    return classical_relent(p, q)
