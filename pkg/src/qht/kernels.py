"""Hot numeric loops, each with a numba and a pure-numpy implementation.

The backend is chosen once at import time from ``QHT_BACKEND`` (``numba`` or
``numpy``).  Without the variable, numba is used when it imports cleanly.
Both implementations stay importable as ``<name>_nb`` / ``<name>_np`` so they
can be cross-checked and benchmarked against each other.
"""

from __future__ import annotations

import itertools
import math
import os

import numpy as np
from scipy.special import gammaln

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda fn: fn


def _select_backend() -> str:
    requested = os.environ.get("QHT_BACKEND", "").strip().lower()
    if requested == "numpy":
        return "numpy"
    if requested == "numba":
        if not HAVE_NUMBA:
            raise ImportError("QHT_BACKEND=numba but numba is not installed")
        return "numba"
    if requested:
        raise ValueError(f"unknown QHT_BACKEND {requested!r}")
    return "numba" if HAVE_NUMBA else "numpy"


BACKEND = _select_backend()


# --------------------------------------------------------------------------
# Q_s from spectral data: sum_ij lam_i^(1-s) mu_j^s |<x_i|y_j>|^2, 0^0 = 0
# --------------------------------------------------------------------------

def q_s_spectral_np(lam, mu, overlap, s_values):
    lam = np.asarray(lam, dtype=float)
    mu = np.asarray(mu, dtype=float)
    s = np.atleast_1d(np.asarray(s_values, dtype=float))
    with np.errstate(divide="ignore"):
        loglam = np.where(lam > 0, np.log(np.where(lam > 0, lam, 1.0)), -np.inf)
        logmu = np.where(mu > 0, np.log(np.where(mu > 0, mu, 1.0)), -np.inf)
    # exp((1-s) * log 0) must be 0 at s = 1 too, hence the explicit masks
    a = np.where(lam > 0, np.exp(np.outer(1.0 - s, np.where(lam > 0, loglam, 0.0))), 0.0)
    b = np.where(mu > 0, np.exp(np.outer(s, np.where(mu > 0, logmu, 0.0))), 0.0)
    return np.einsum("si,ij,sj->s", a, overlap, b)


@njit(cache=True)
def q_s_spectral_nb(lam, mu, overlap, s_values):
    d0 = lam.shape[0]
    d1 = mu.shape[0]
    out = np.zeros(s_values.shape[0])
    a = np.zeros(d0)
    b = np.zeros(d1)
    for k in range(s_values.shape[0]):
        s = s_values[k]
        for i in range(d0):
            a[i] = lam[i] ** (1.0 - s) if lam[i] > 0 else 0.0
        for j in range(d1):
            b[j] = mu[j] ** s if mu[j] > 0 else 0.0
        acc = 0.0
        for i in range(d0):
            if a[i] == 0.0:
                continue
            row = 0.0
            for j in range(d1):
                row += overlap[i, j] * b[j]
            acc += a[i] * row
        out[k] = acc
    return out


# --------------------------------------------------------------------------
# log Q~_s for a pair of strictly positive, normalized vectors.  Anchored at
# the nearer endpoint through expm1 so that log Q~_s / (1 - s) keeps full
# relative accuracy as s -> 1.
# --------------------------------------------------------------------------

def log_q_tilde_np(pt, qt, s_values):
    pt = np.asarray(pt, dtype=float)
    qt = np.asarray(qt, dtype=float)
    s = np.atleast_1d(np.asarray(s_values, dtype=float))
    ratio = np.log(pt) - np.log(qt)
    hi = s >= 0.5
    out = np.empty_like(s)
    # p^(1-s) q^s = q exp((1-s) L) = p exp(-s L),  L = log(p / q)
    out[hi] = np.log1p(np.expm1(np.outer(1.0 - s[hi], ratio)) @ qt)
    out[~hi] = np.log1p(np.expm1(np.outer(-s[~hi], ratio)) @ pt)
    return out


@njit(cache=True)
def log_q_tilde_nb(pt, qt, s_values):
    m = pt.shape[0]
    ratio = np.empty(m)
    for i in range(m):
        ratio[i] = math.log(pt[i]) - math.log(qt[i])
    out = np.empty(s_values.shape[0])
    for k in range(s_values.shape[0]):
        s = s_values[k]
        acc = 0.0
        if s >= 0.5:
            for i in range(m):
                acc += qt[i] * math.expm1((1.0 - s) * ratio[i])
        else:
            for i in range(m):
                acc += pt[i] * math.expm1(-s * ratio[i])
        out[k] = math.log1p(acc)
    return out


def exponent_values_np(pt, qt, rprime, s_values):
    s = np.atleast_1d(np.asarray(s_values, dtype=float))
    return (-rprime * s - log_q_tilde_np(pt, qt, s)) / (1.0 - s)


@njit(cache=True)
def exponent_values_nb(pt, qt, rprime, s_values):
    lq = log_q_tilde_nb(pt, qt, s_values)
    out = np.empty(s_values.shape[0])
    for k in range(s_values.shape[0]):
        s = s_values[k]
        out[k] = (-rprime * s - lq[k]) / (1.0 - s)
    return out


# --------------------------------------------------------------------------
# sum over x in Omega^n of min(eta0 p^n(x), eta1 q^n(x)), grouped by type
# --------------------------------------------------------------------------

def _compositions(n: int, k: int) -> np.ndarray:
    """All length-``k`` non-negative integer vectors summing to ``n``."""
    rows = []
    for bars in itertools.combinations(range(n + k - 1), k - 1):
        prev = -1
        row = []
        for b in bars:
            row.append(b - prev - 1)
            prev = b
        row.append(n + k - 1 - prev - 1)
        rows.append(row)
    return np.asarray(rows, dtype=np.int64).reshape(-1, k)


def _weighted_log_prob(counts, logv):
    finite = np.isfinite(logv)
    safe = np.where(finite, logv, 0.0)
    total = counts @ safe
    impossible = (counts[:, ~finite] > 0).any(axis=1)
    return np.where(impossible, -np.inf, total)


def type_class_min_sum_np(p, q, eta0, eta1, n):
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    counts = _compositions(n, p.shape[0])
    with np.errstate(divide="ignore"):
        logp = np.log(p)
        logq = np.log(q)
    lmult = gammaln(n + 1) - gammaln(counts + 1).sum(axis=1)
    a = math.log(eta0) + _weighted_log_prob(counts, logp)
    b = math.log(eta1) + _weighted_log_prob(counts, logq)
    return float(np.exp(lmult + np.minimum(a, b)).sum())


@njit(cache=True)
def type_class_min_sum_nb(p, q, eta0, eta1, n):
    k = p.shape[0]
    logp = np.empty(k)
    logq = np.empty(k)
    for i in range(k):
        logp[i] = math.log(p[i]) if p[i] > 0 else -np.inf
        logq[i] = math.log(q[i]) if q[i] > 0 else -np.inf
    le0 = math.log(eta0)
    le1 = math.log(eta1)
    lgn = math.lgamma(n + 1.0)
    counts = np.zeros(k, dtype=np.int64)
    counts[0] = n
    total = 0.0
    while True:
        lm = lgn
        a = le0
        b = le1
        for i in range(k):
            c = counts[i]
            if c > 0:
                lm -= math.lgamma(c + 1.0)
                a += c * logp[i]
                b += c * logq[i]
        m = a if a < b else b
        if m > -np.inf:
            total += math.exp(lm + m)
        if counts[k - 1] == n:
            break
        j = k - 2
        while counts[j] == 0:
            j -= 1
        counts[j] -= 1
        tail = counts[k - 1]
        counts[k - 1] = 0
        counts[j + 1] = tail + 1
    return total


def _pick(np_impl, nb_impl):
    return nb_impl if BACKEND == "numba" else np_impl


def q_s_spectral(lam, mu, overlap, s_values) -> np.ndarray:
    s = np.ascontiguousarray(np.atleast_1d(np.asarray(s_values, dtype=float)))
    fn = _pick(q_s_spectral_np, q_s_spectral_nb)
    return fn(
        np.ascontiguousarray(lam, dtype=float),
        np.ascontiguousarray(mu, dtype=float),
        np.ascontiguousarray(overlap, dtype=float),
        s,
    )


def log_q_tilde(pt, qt, s_values) -> np.ndarray:
    s = np.ascontiguousarray(np.atleast_1d(np.asarray(s_values, dtype=float)))
    fn = _pick(log_q_tilde_np, log_q_tilde_nb)
    return fn(np.ascontiguousarray(pt, dtype=float), np.ascontiguousarray(qt, dtype=float), s)


def exponent_values(pt, qt, rprime: float, s_values) -> np.ndarray:
    s = np.ascontiguousarray(np.atleast_1d(np.asarray(s_values, dtype=float)))
    fn = _pick(exponent_values_np, exponent_values_nb)
    return fn(
        np.ascontiguousarray(pt, dtype=float),
        np.ascontiguousarray(qt, dtype=float),
        float(rprime),
        s,
    )


def type_class_min_sum(p, q, eta0: float, eta1: float, n: int) -> float:
    fn = _pick(type_class_min_sum_np, type_class_min_sum_nb)
    return float(
        fn(
            np.ascontiguousarray(p, dtype=float),
            np.ascontiguousarray(q, dtype=float),
            float(eta0),
            float(eta1),
            int(n),
        )
    )
