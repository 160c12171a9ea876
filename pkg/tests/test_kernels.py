import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qht import kernels
from qht.mapping import conditionalize, ns_map, spectral_pair
from qht.states import random_density

needs_numba = pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba not installed")

GRID = np.linspace(0.0, 1.0, 101)


def _pair(seed, dim, rank):
    return random_density(dim, dim, seed=seed), random_density(dim, rank, seed=seed + 1)


@needs_numba
@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000), dim=st.integers(1, 5), data=st.data())
def test_q_s_backends_agree(seed, dim, data):
    rank = data.draw(st.integers(1, dim))
    sp = spectral_pair(*_pair(seed, dim, rank))
    a = kernels.q_s_spectral_np(sp.lam, sp.mu, sp.overlap, GRID)
    b = kernels.q_s_spectral_nb(sp.lam, sp.mu, sp.overlap, GRID)
    np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-15)


@needs_numba
@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000), dim=st.integers(2, 4), r=st.floats(0, 2))
def test_exponent_backends_agree(seed, dim, r):
    cp = conditionalize(ns_map(*_pair(seed, dim, dim)))
    s = np.linspace(0.0, 1.0 - 1e-9, 201)
    a = kernels.exponent_values_np(cp.p_tilde, cp.q_tilde, r, s)
    b = kernels.exponent_values_nb(cp.p_tilde, cp.q_tilde, r, s)
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-13)


@needs_numba
@pytest.mark.parametrize("k,n", [(1, 5), (2, 9), (4, 6), (9, 4)])
def test_type_class_backends_agree(k, n):
    rng = np.random.default_rng(k * 100 + n)
    p, q = rng.dirichlet(np.ones(k)), rng.dirichlet(np.ones(k))
    if k > 2:
        p[0] = 0.0
        p /= p.sum()
    a = kernels.type_class_min_sum_np(p, q, 0.4, 0.6, n)
    b = kernels.type_class_min_sum_nb(p, q, 0.4, 0.6, n)
    assert a == pytest.approx(b, rel=1e-12)


def test_log_q_tilde_endpoints():
    p, q = np.array([0.2, 0.8]), np.array([0.5, 0.5])
    out = kernels.log_q_tilde(p, q, [0.0, 1.0, 0.5])
    assert out[0] == pytest.approx(0.0, abs=1e-16)
    assert out[1] == pytest.approx(0.0, abs=1e-16)
    assert out[2] == pytest.approx(np.log(np.sum(np.sqrt(p * q))), abs=1e-15)


def test_log_q_tilde_near_one_keeps_relative_accuracy():
    p, q = np.array([0.2, 0.8]), np.array([0.5, 0.5])
    s = 1 - 1e-9
    ratio = kernels.log_q_tilde(p, q, [s])[0] / (1 - s)
    # derivative of log Q~ at s = 1 is H(q||p), so log Q~_s / (1 - s) -> -H(q||p)
    assert ratio == pytest.approx(-np.sum(q * np.log(q / p)), rel=1e-6)


def test_backend_flag_selects_numpy():
    code = "from qht import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, QHT_BACKEND="numpy")
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "numpy"


def test_backend_flag_rejects_unknown():
    code = "import qht"
    env = dict(os.environ, QHT_BACKEND="fortran")
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env)
    assert out.returncode != 0 and "QHT_BACKEND" in out.stderr


@needs_numba
def test_results_identical_across_backends():
    code = (
        "from qht import chernoff_distance, e_quantum, random_density;"
        "from qht.asymptotics import chernoff_rate_experiment;"
        "r, s = random_density(2, seed=3), random_density(2, seed=4);"
        "c = chernoff_distance(r, s); e = e_quantum(r, s, 0.1);"
        "x = chernoff_rate_experiment(r, s, 0.5, 6);"
        "print(repr(c.xi_qcb), repr(e.value), [repr(v.lower_bound) for v in x.entries])"
    )
    outs = {}
    for backend in ("numpy", "numba"):
        env = dict(os.environ, QHT_BACKEND=backend)
        outs[backend] = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True).stdout
    a = outs["numpy"].split(" ", 2)
    b = outs["numba"].split(" ", 2)
    assert float(a[0]) == pytest.approx(float(b[0]), abs=1e-12)
    assert float(a[1]) == pytest.approx(float(b[1]), abs=1e-9)
