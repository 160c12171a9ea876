import math

import numpy as np
import pytest
import scipy.linalg

from qht import linalg
from qht.chernoff import (
    CURVE_POINTS,
    chernoff_distance,
    fidelity,
    hellinger_arc,
    q_s,
    q_s_curve,
    q_s_derivative,
    spectral_derivative,
    trace_distance,
)
from qht.errors import DimensionMismatch, NotFaithful, SOutOfRange
from qht.mapping import classical_q_s, ns_map, spectral_pair
from qht.states import diag_state, pure_state, random_density
from qht.verify import convexity_margin, joint_concavity_margin, partial_trace_margin

from conftest import B, oracle_q, random_pairs


class TestQs:
    def test_identical(self):
        rho = random_density(3, 2, seed=1)
        for s in (0.0, 0.3, 1.0):
            assert q_s(rho, rho, s) == pytest.approx(1.0, abs=1e-12)

    def test_symmetric_pair_midpoint(self, symmetric_pair):
        assert q_s(*symmetric_pair, 0.5) == pytest.approx(math.sqrt(3) / 2, abs=1e-15)

    @pytest.mark.parametrize("t", [0.1, 0.3, 0.6])
    def test_sharpness_pair(self, t):
        rho, sigma = pure_state([1, 0]), diag_state(1 - t, t)
        for s in np.linspace(0, 1, 11):
            assert q_s(rho, sigma, s) == pytest.approx((1 - t) ** s, abs=1e-15)
        assert q_s(rho, sigma, 1.0) + trace_distance(rho, sigma) == pytest.approx(1.0, abs=1e-12)

    def test_matches_operator_products(self):
        for rho, sigma in random_pairs(25, seed=11):
            for s in (0.0, 0.25, 0.5, 0.9, 1.0):
                assert q_s(rho, sigma, s) == pytest.approx(oracle_q(rho, sigma, s), abs=1e-10)

    def test_out_of_range(self, symmetric_pair):
        with pytest.raises(SOutOfRange):
            q_s(*symmetric_pair, 1.5)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            q_s(np.eye(2) / 2, np.eye(3) / 3, 0.5)


class TestDerivative:
    def test_identical_states(self):
        rho = random_density(3, seed=2)
        assert q_s_derivative(rho, rho, 0.4) == pytest.approx(0.0, abs=1e-12)

    def test_commuting_closed_form(self):
        p, q = np.array([0.2, 0.5, 0.3]), np.array([0.6, 0.1, 0.3])
        s = 0.35
        expected = float(np.sum(p ** (1 - s) * q**s * np.log(q / p)))
        assert q_s_derivative(diag_state(*p), diag_state(*q), s) == pytest.approx(expected, abs=1e-13)

    @pytest.mark.parametrize("seed", range(10))
    def test_central_difference(self, seed):
        rho, sigma = random_pairs(1, dims=(2, 3), seed=100 + seed, faithful=True)[0]
        h = 1e-5
        for s in (0.1, 0.3, 0.7):
            fd = (q_s(rho, sigma, s + h) - q_s(rho, sigma, s - h)) / (2 * h)
            an = q_s_derivative(rho, sigma, s)
            assert abs(an - fd) <= 1e-6 * max(abs(an), 1e-3)
            assert spectral_derivative(spectral_pair(rho, sigma), s) == pytest.approx(an, abs=1e-12)

    def test_requires_faithful(self, support_pair):
        with pytest.raises(NotFaithful):
            q_s_derivative(*support_pair, 0.5)


class TestChernoffDistance:
    def test_symmetric_pair(self, symmetric_pair):
        res = chernoff_distance(*symmetric_pair)
        assert res.xi_qcb == pytest.approx(-math.log(math.sqrt(3) / 2), abs=1e-12)
        assert abs(res.s_star - 0.5) < 1e-8
        assert res.q_star == pytest.approx(math.sqrt(3) / 2, abs=1e-14)

    def test_support_pair(self, support_pair):
        res = chernoff_distance(*support_pair)
        assert res.s_star == 1.0
        assert res.xi_qcb == pytest.approx(-math.log(1 - B), abs=1e-12)

    def test_pure_vs_mixed(self):
        v = np.array([0.6, 0.8j])
        sigma = random_density(2, seed=5)
        res = chernoff_distance(pure_state(v), sigma)
        assert res.s_star == 1.0
        assert res.q_star == pytest.approx(np.vdot(v, sigma @ v).real, abs=1e-12)

    def test_orthogonal(self):
        res = chernoff_distance(pure_state([1, 0]), pure_state([0, 1]))
        assert res.q_star == 0.0
        assert res.xi_qcb == math.inf

    def test_identical(self):
        rho = random_density(3, seed=6)
        assert chernoff_distance(rho, rho).xi_qcb == pytest.approx(0.0, abs=1e-12)

    def test_curve_shape(self, faithful_qubits):
        res = chernoff_distance(*faithful_qubits)
        assert len(res.curve) == CURVE_POINTS
        assert res.curve[0][0] == 0.0 and res.curve[-1][0] == 1.0
        assert all(res.q_star <= q + 1e-12 for _, q in res.curve)

    def test_minimum_against_dense_grid(self):
        for rho, sigma in random_pairs(30, seed=12):
            res = chernoff_distance(rho, sigma)
            dense = np.min(q_s_curve(rho, sigma, np.linspace(0, 1, 20001)))
            assert res.q_star <= dense + 1e-12
            assert res.q_star >= dense - 1e-8
            assert res.xi_qcb == pytest.approx(-math.log(res.q_star), abs=1e-15)

    def test_symmetry_of_optimum(self):
        for rho, sigma in random_pairs(30, seed=13):
            a = chernoff_distance(rho, sigma)
            b = chernoff_distance(sigma, rho)
            assert a.xi_qcb == pytest.approx(b.xi_qcb, abs=1e-9)
            # s* need not be unique (flat curves for pure pairs), so compare values
            assert q_s(sigma, rho, 1.0 - a.s_star) == pytest.approx(b.q_star, abs=1e-12)

    def test_matches_classical_minimum(self):
        for rho, sigma in random_pairs(30, seed=14):
            pair = ns_map(rho, sigma)
            classical = np.min(classical_q_s(pair, np.linspace(0, 1, 20001)))
            assert chernoff_distance(rho, sigma).xi_qcb == pytest.approx(-math.log(classical), abs=1e-8)


class TestFidelityAndDistance:
    def test_fidelity_basics(self):
        rho = random_density(3, seed=1)
        assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-12)
        assert fidelity(pure_state([1, 0]), pure_state([0, 1])) == pytest.approx(0.0, abs=1e-15)

    def test_pure_pure(self):
        v, w = np.array([1, 1j]) / math.sqrt(2), np.array([0.6, 0.8])
        assert fidelity(pure_state(v), pure_state(w)) == pytest.approx(abs(np.vdot(v, w)), abs=1e-12)

    def test_matches_sqrtm_formula(self):
        for rho, sigma in random_pairs(20, seed=15, faithful=True):
            r = scipy.linalg.sqrtm(rho)
            f = np.trace(scipy.linalg.sqrtm(r @ sigma @ r)).real
            assert fidelity(rho, sigma) == pytest.approx(f, abs=1e-9)

    def test_trace_distance(self, symmetric_pair):
        rho = random_density(2, seed=1)
        assert trace_distance(rho, rho) == pytest.approx(0.0, abs=1e-15)
        assert trace_distance(pure_state([1, 0]), pure_state([0, 1])) == pytest.approx(1.0)
        assert trace_distance(*symmetric_pair) == pytest.approx(0.5)


class TestHellingerArc:
    def test_commuting_pair_is_classical_arc(self):
        p, q = np.array([0.2, 0.5, 0.3]), np.array([0.6, 0.1, 0.3])
        s = 0.4
        ps = p ** (1 - s) * q**s
        ps /= ps.sum()
        pt = hellinger_arc(diag_state(*p), diag_state(*q), s)
        np.testing.assert_allclose(np.sort(pt.spectrum), np.sort(ps), atol=1e-13)
        assert pt.rel_ent_to_rho == pytest.approx(np.sum(ps * np.log(ps / p)), abs=1e-12)
        assert pt.rel_ent_to_sigma == pytest.approx(np.sum(ps * np.log(ps / q)), abs=1e-12)

    def test_balance_symmetric_pair(self, symmetric_pair):
        res = chernoff_distance(*symmetric_pair)
        pt = hellinger_arc(*symmetric_pair, res.s_star)
        assert pt.rel_ent_to_rho == pytest.approx(pt.rel_ent_to_sigma, abs=1e-9)

    def test_balance_random_qubit(self, faithful_qubits):
        res = chernoff_distance(*faithful_qubits)
        pt = hellinger_arc(*faithful_qubits, res.s_star)
        assert abs(pt.rel_ent_to_rho - pt.rel_ent_to_sigma) < 1e-6

    def test_spectrum_invariants(self):
        for rho, sigma in random_pairs(10, seed=16, faithful=True):
            pt = hellinger_arc(rho, sigma, 0.3)
            assert np.all(pt.spectrum > 0)
            assert pt.spectrum.sum() == pytest.approx(1.0, abs=1e-9)
            # non-Hermitian product has the same spectrum
            direct = np.linalg.eigvals(linalg.matrix_power(rho, 0.7) @ linalg.matrix_power(sigma, 0.3))
            np.testing.assert_allclose(np.sort(direct.real / direct.real.sum()), np.sort(pt.spectrum), atol=1e-10)

    def test_gated(self, support_pair, faithful_qubits):
        with pytest.raises(NotFaithful):
            hellinger_arc(*support_pair, 0.5)
        with pytest.raises(SOutOfRange):
            hellinger_arc(*faithful_qubits, 1.0)


class TestStructure:
    def test_convexity(self):
        for rho, sigma in random_pairs(40, seed=17):
            assert convexity_margin(rho, sigma) >= -1e-10

    def test_joint_concavity(self):
        pairs = random_pairs(40, dims=(3,), seed=18)
        for (r1, s1), (r2, s2) in zip(pairs[::2], pairs[1::2]):
            for t in (0.25, 0.5, 0.75):
                assert joint_concavity_margin(r1, s1, r2, s2, t) >= -1e-9

    def test_partial_trace_monotone(self):
        for rho, sigma in random_pairs(20, dims=(4,), seed=19):
            assert partial_trace_margin(rho, sigma) >= -1e-9

    def test_identical_states_trivially_tight(self):
        rho = random_density(2, seed=3)
        assert joint_concavity_margin(rho, rho, rho, rho, 0.5) == pytest.approx(0.0, abs=1e-12)
