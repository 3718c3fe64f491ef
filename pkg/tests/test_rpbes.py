import math

import numpy as np
import pytest

from concurrence_monotones import monotones as mono
from concurrence_monotones.rpbes import (
    PhaseMatrix,
    c2_final,
    c2_general,
    c2_normalization_factor,
    canonical_phases,
    design_phases,
    final_state,
    g_product,
    measurement_basis,
    outcome_agreement,
    phase_matrix_v,
    run_protocol,
    scaled_phases,
    zero_phases,
)
from concurrence_monotones.sampling import random_spectrum, rng_for


def random_theta(d, rng):
    return PhaseMatrix(rng.uniform(0, 2 * np.pi, (d, d)))


class TestBasis:
    @pytest.mark.parametrize("theta", ["zero", "random"])
    def test_orthonormal(self, theta):
        rng = rng_for(90)
        for d in (2, 3, 4):
            th = zero_phases(d) if theta == "zero" else random_theta(d, rng)
            b = np.array(measurement_basis(d, th))
            assert np.allclose(b.conj() @ b.T, np.eye(d * d), atol=1e-12)

    def test_single_amplitude(self):
        th = random_theta(3, rng_for(91))
        vec = measurement_basis(3, th)[3 * 1 + 2]
        expect = np.exp(1j * (2 * np.pi / 9 * 5 * 7 + th.theta[2, 1])) / 3
        assert vec[3 * 2 + 1] == pytest.approx(expect, abs=1e-14)

    def test_phase_matrix_validation(self):
        with pytest.raises(ValueError):
            PhaseMatrix(np.zeros((2, 3)))
        with pytest.raises(ValueError):
            PhaseMatrix(np.full((2, 2), np.inf))


class TestProtocol:
    def test_zero_phases_separable(self):
        lam, eta = [0.6, 0.3, 0.1], [0.5, 0.3, 0.2]
        f = final_state(lam, eta, zero_phases(3))
        assert mono.g_concurrence(f) < 1e-12
        assert mono.concurrence_k(f, 2) < 1e-7

    def test_canonical_saturates(self):
        for t in range(10):
            rng = rng_for(92, t)
            d = 2 + t % 4
            lam, eta = random_spectrum(d, rng), random_spectrum(d, rng)
            f = final_state(lam, eta, canonical_phases(d))
            assert mono.g_concurrence(f) == pytest.approx(g_product(lam, eta), abs=1e-10)

    def test_uniform_probabilities_maximal(self):
        rng = rng_for(93)
        for th in (zero_phases(2), canonical_phases(2), random_theta(2, rng)):
            run = run_protocol([0.5, 0.5], [0.5, 0.5], th)
            assert np.allclose(run.probabilities, 0.25, atol=1e-12)

    def test_outcomes_agree(self):
        for t in range(10):
            rng = rng_for(94, t)
            d = 2 + t % 4
            lam, eta = random_spectrum(d, rng), random_spectrum(d, rng)
            th = random_theta(d, rng)
            run = run_protocol(lam, eta, th)
            assert len(run.outcomes) == d * d
            assert np.allclose(run.probabilities, 1 / d**2, atol=1e-10)
            assert outcome_agreement(run, final_state(lam, eta, th)) >= 1 - 1e-10
            assert run.classical_bits == (2 * math.log2(d), math.log2(d))

    def test_determinant_factorization(self):
        for t in range(10):
            rng = rng_for(95, t)
            lam, eta = random_spectrum(3, rng), random_spectrum(3, rng)
            th = random_theta(3, rng)
            det_v = abs(np.linalg.det(phase_matrix_v(th)))
            expect = g_product(lam, eta) * det_v ** (2 / 3)
            assert mono.g_concurrence(final_state(lam, eta, th)) == pytest.approx(expect, abs=1e-10)

    def test_canonical_v_unitary(self):
        for d in range(2, 6):
            v = phase_matrix_v(canonical_phases(d))
            assert np.allclose(v @ v.conj().T, np.eye(d), atol=1e-12)

    def test_invalid_spectra(self):
        with pytest.raises(ValueError):
            final_state([0.6, 0.6], [0.5, 0.5], zero_phases(2))
        with pytest.raises(ValueError):
            final_state([0.5, 0.5], [1.0, 0, 0], zero_phases(2))
        with pytest.raises(ValueError):
            run_protocol([1.2, -0.2], [0.5, 0.5], zero_phases(2))
        with pytest.raises(ValueError):
            run_protocol([0.5, 0.5], [0.5, 0.5], zero_phases(3))


class TestC2:
    def test_zero(self):
        assert c2_final([0.7, 0.3], [0.4, 0.6], zero_phases(2)) == pytest.approx(0.0, abs=1e-15)

    def test_maximal_qubits(self):
        assert c2_final([0.5, 0.5], [0.5, 0.5], canonical_phases(2)) == pytest.approx(1.0, abs=1e-12)

    def test_normalization_factor(self):
        assert c2_normalization_factor(2) == 1.0
        assert c2_normalization_factor(3) == pytest.approx(math.sqrt(3 / 4))

    def test_matches_general_path(self):
        for t in range(20):
            rng = rng_for(96, t)
            d = 2 + t % 4
            lam, eta = random_spectrum(d, rng), random_spectrum(d, rng)
            th = random_theta(d, rng)
            scaled = c2_final(lam, eta, th) * c2_normalization_factor(d)
            assert scaled == pytest.approx(c2_general(lam, eta, th), abs=1e-9)

    def test_optimal_phases_depend_on_monotone(self):
        # canonical phases maximize G; a small perturbation lowers G yet raises C_2
        lam = eta = [0.7, 0.2, 0.1]
        base = canonical_phases(3)
        g0, c0 = mono.g_concurrence(final_state(lam, eta, base)), c2_general(lam, eta, base)
        found = False
        rng = rng_for(97)
        for _ in range(400):
            th = PhaseMatrix(base.theta + 0.3 * rng.standard_normal((3, 3)))
            g, c = mono.g_concurrence(final_state(lam, eta, th)), c2_general(lam, eta, th)
            if g < g0 - 1e-9 and c > c0 + 1e-9:
                found = True
                break
        assert found


class TestDesign:
    def test_endpoints(self):
        lam, eta = [0.6, 0.4], [0.7, 0.3]
        th, alpha = design_phases(lam, eta, 0.0)
        assert alpha == 0.0 and np.all(th.theta == 0)
        th, alpha = design_phases(lam, eta, g_product(lam, eta))
        assert alpha == 1.0 and np.allclose(th.theta, canonical_phases(2).theta)

    def test_half_maximal(self):
        th, _ = design_phases([0.5, 0.5], [0.5, 0.5], 0.5)
        assert abs(mono.g_concurrence(final_state([0.5, 0.5], [0.5, 0.5], th)) - 0.5) <= 1e-6

    def test_scaled_alpha(self):
        th, alpha = design_phases([0.6, 0.3, 0.1], [0.5, 0.3, 0.2], 0.2)
        assert np.allclose(th.theta, scaled_phases(3, alpha).theta)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            design_phases([0.9, 0.1], [0.9, 0.1], 0.5)
        with pytest.raises(ValueError):
            design_phases([0.9, 0.1], [0.9, 0.1], -0.1)
