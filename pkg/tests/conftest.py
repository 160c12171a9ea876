import numpy as np
import pytest
import scipy.linalg

from qht.states import diag_state, random_density

B = 0.35


def oracle_power(m, t):
    """Independent fractional power via scipy's eigh; zero eigenvalues map to 0 even at t = 0."""
    w, v = scipy.linalg.eigh(0.5 * (m + np.conj(m.T)))
    tol = len(w) * 1e-12 * max(np.max(np.abs(w)), 1e-300)
    f = np.where(w > tol, np.clip(w, tol, None) ** t, 0.0)
    return (v * f) @ np.conj(v.T)


def oracle_q(rho, sigma, s):
    """``Tr[rho^(1-s) sigma^s]`` from explicit matrix products."""
    return float(np.trace(oracle_power(rho, 1.0 - s) @ oracle_power(sigma, s)).real)


def random_pairs(count, dims=(2, 3, 4), seed=0, faithful=False):
    """Seeded pairs; unless ``faithful``, ranks are drawn from ``1..dim``."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        d = int(rng.choice(dims))
        r1 = d if faithful else int(rng.integers(1, d + 1))
        r2 = d if faithful else int(rng.integers(1, d + 1))
        out.append((random_density(d, r1, seed=[seed, k, 0]), random_density(d, r2, seed=[seed, k, 1])))
    return out


@pytest.fixture
def symmetric_pair():
    return diag_state(0.25, 0.75), diag_state(0.75, 0.25)


@pytest.fixture
def support_pair():
    return diag_state(0.0, 1.0), diag_state(B, 1.0 - B)


@pytest.fixture
def faithful_qubits():
    return random_density(2, seed=3), random_density(2, seed=4)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
