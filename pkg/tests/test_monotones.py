import math

import numpy as np
import pytest

from concurrence_monotones import monotones as mono
from concurrence_monotones.errors import NormalizationError
from concurrence_monotones.sampling import (
    haar_unitary,
    random_density,
    random_pure_state,
    random_spectrum,
    rng_for,
    state_with_spectrum,
)
from concurrence_monotones.states import DensityMatrix, PureState, apply_local, schmidt

from helpers import bell, brute_esf, product


def werner(p: float) -> DensityMatrix:
    v = bell().vector()
    return DensityMatrix(p * np.outer(v, v.conj()) + (1 - p) / 4 * np.eye(4), dims=(2, 2))


def wootters_textbook(rho: DensityMatrix) -> float:
    """Square roots of the eigenvalues of the non-Hermitian product rho * flip(rho)."""
    ev = np.linalg.eigvals(rho.mat @ mono.spin_flip(rho))
    s = np.sort(np.sqrt(np.clip(ev.real, 0, None)))[::-1]
    return max(0.0, s[0] - s[1] - s[2] - s[3])


class TestConcurrenceK:
    @pytest.mark.parametrize("path", mono.PATHS)
    def test_maximal_d3(self, path):
        assert mono.concurrence_k(bell(3), 2, path) == pytest.approx(1.0, abs=1e-12)

    def test_two_qubit_value(self):
        s = PureState(np.diag([math.sqrt(0.9), math.sqrt(0.1)]))
        assert mono.concurrence_k(s, 2) == pytest.approx(0.6, abs=1e-12)

    def test_rank_below_k(self):
        s = state_with_spectrum([0.7, 0.3, 0, 0], rng_for(30))
        assert mono.concurrence_k(s, 3) == 0.0
        assert mono.concurrence_k(s, 4) == 0.0

    def test_direct_definition(self):
        for t in range(20):
            d = 2 + t % 5
            s = random_pure_state(d, d, rng_for(31, t))
            lam = schmidt(s, cutoff=0).lambdas
            for k in range(1, d + 1):
                expect = (brute_esf(lam, k) * d**k / math.comb(d, k)) ** (1 / k)
                assert mono.concurrence_k(s, k) == pytest.approx(expect, rel=1e-12)

    def test_errors(self):
        with pytest.raises(ValueError):
            mono.concurrence_k(bell(), 3)
        with pytest.raises(ValueError):
            mono.concurrence_k(random_pure_state(2, 3, rng_for(32)), 2)
        with pytest.raises(ValueError):
            mono.concurrence_k(bell(), 2, "bogus")
        with pytest.raises(NormalizationError):
            mono.concurrence_k(PureState(np.eye(2), normalized=False), 2)


class TestVector:
    def test_bell(self):
        v = mono.monotone_vector(bell())
        assert np.allclose(v.values, [1, 1])
        assert v[2] == pytest.approx(1.0)
        assert v.g == pytest.approx(1.0)

    def test_product(self):
        assert np.allclose(mono.monotone_vector(product(3)).values, [1, 0, 0])

    def test_maximal_all_k(self):
        for d in range(2, 7):
            assert np.allclose(mono.monotone_vector(bell(d)).values, 1.0)

    def test_matches_spectrum_form(self):
        rng = rng_for(33)
        lam = random_spectrum(4, rng)
        s = state_with_spectrum(lam, rng)
        assert np.allclose(mono.monotone_vector(s).values, mono.monotones_of_spectrum(lam), atol=1e-12)


class TestG:
    def test_maximal(self):
        for d in range(2, 7):
            assert mono.g_concurrence(bell(d)) == pytest.approx(1.0)

    def test_equals_last_monotone(self):
        for t in range(20):
            d = 2 + t % 5
            s = random_pure_state(d, d, rng_for(34, t))
            assert mono.g_concurrence(s) == pytest.approx(mono.concurrence_k(s, d), rel=1e-10)

    def test_scaling(self):
        s = random_pure_state(3, 3, rng_for(35))
        c = 0.7 + 1.1j
        scaled = PureState(c * s.amps, normalized=False)
        assert mono.g_concurrence(scaled, normalized=False) == pytest.approx(abs(c) ** 2 * mono.g_concurrence(s), rel=1e-10)
        with pytest.raises(NormalizationError):
            mono.g_concurrence(scaled)

    def test_local_operators(self):
        for t in range(10):
            rng = rng_for(36, t)
            d = 2 + t % 3
            s = random_pure_state(d, d, rng)
            a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            b = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            out = mono.g_concurrence(apply_local(a, b, s), normalized=False)
            expect = abs(np.linalg.det(a)) ** (2 / d) * abs(np.linalg.det(b)) ** (2 / d) * mono.g_concurrence(s)
            assert out == pytest.approx(expect, rel=1e-10)

    def test_determinant_form(self):
        s = random_pure_state(4, 4, rng_for(37))
        a = s.amps
        assert mono.g_concurrence(s) == pytest.approx(4 * abs(np.linalg.det(a.conj().T @ a)) ** 0.25, rel=1e-12)

    def test_rank_deficient_is_zero(self):
        s = PureState(np.outer([0.6, 0.8, 0], [1, 0, 0]).astype(complex))
        assert mono.g_concurrence(s) < 1e-12


class TestEntropy:
    def test_bell_and_product(self):
        assert mono.entropy_entanglement(bell()) == pytest.approx(1.0)
        assert mono.entropy_entanglement(product()) == 0.0

    def test_base(self):
        assert mono.entropy_entanglement(bell(3), base=3) == pytest.approx(1.0)
        assert mono.entropy_entanglement(bell(), base=math.e) == pytest.approx(math.log(2))

    def test_d2_values(self):
        assert mono.entropy_from_c2_d2(1.0) == pytest.approx(1.0)
        assert mono.entropy_from_c2_d2(0.0) == 0.0
        assert mono.entropy_from_c2_d2(0.6) == pytest.approx(0.468996, abs=1e-6)
        h = -(0.9 * math.log2(0.9) + 0.1 * math.log2(0.1))
        assert mono.entropy_from_c2_d2(0.6) == pytest.approx(h, abs=1e-14)

    def test_d2_range(self):
        with pytest.raises(ValueError):
            mono.entropy_from_c2_d2(1.2)
        with pytest.raises(ValueError):
            mono.entropy_from_c2_d2(-0.1)

    def test_d3_limits(self):
        assert mono.entropy_from_c23_d3(0.0, 0.0) == pytest.approx(0.0, abs=1e-12)
        assert mono.entropy_from_c23_d3(1.0, 1.0) == pytest.approx(math.log2(3), abs=1e-12)
        assert mono.entropy_from_c23_d3(1.0 - 1e-13, 1.0) == pytest.approx(math.log2(3), abs=1e-9)

    def test_d3_random(self):
        for t in range(30):
            rng = rng_for(38, t)
            s = random_pure_state(3, 3, rng)
            v = mono.monotone_vector(s)
            assert mono.entropy_from_c23_d3(v[2], v[3]) == pytest.approx(mono.entropy_entanglement(s), abs=1e-9)

    def test_d3_degenerate_spectra(self):
        for lam in ([0.5, 0.5, 0], [0.6, 0.2, 0.2], [0.4, 0.4, 0.2], [1, 0, 0]):
            c = mono.monotones_of_spectrum(lam)
            direct = -sum(x * math.log2(x) for x in lam if x > 0)
            assert mono.entropy_from_c23_d3(c[1], c[2]) == pytest.approx(direct, abs=1e-7)

    def test_d3_unachievable(self):
        with pytest.raises(ValueError):
            mono.entropy_from_c23_d3(0.1, 0.9)


class TestWootters:
    def test_bell(self):
        assert mono.wootters_concurrence(bell().projector()) == pytest.approx(1.0)

    def test_maximally_mixed(self):
        assert mono.wootters_concurrence(DensityMatrix(np.eye(4) / 4)) == 0.0

    @pytest.mark.parametrize("p", [0.0, 0.2, 1 / 3, 0.5, 0.8, 1.0])
    def test_werner(self, p):
        assert mono.wootters_concurrence(werner(p)) == pytest.approx(max(0.0, (3 * p - 1) / 2), abs=1e-12)

    def test_pure_states(self):
        for t in range(20):
            s = random_pure_state(2, 2, rng_for(39, t))
            assert mono.wootters_concurrence(s.projector()) == pytest.approx(mono.concurrence_k(s, 2), abs=1e-7)

    def test_against_textbook_form(self):
        for t in range(30):
            rho = random_density(4, rng_for(40, t), rank=1 + t % 4)
            assert mono.wootters_concurrence(rho) == pytest.approx(wootters_textbook(rho), abs=1e-7)

    def test_local_unitary_invariance(self):
        rng = rng_for(41)
        rho = random_density(4, rng)
        u = np.kron(haar_unitary(2, rng), haar_unitary(2, rng))
        moved = DensityMatrix((u @ rho.mat @ u.conj().T + (u @ rho.mat @ u.conj().T).conj().T) / 2)
        assert mono.wootters_concurrence(moved) == pytest.approx(mono.wootters_concurrence(rho), abs=1e-10)

    def test_dimension(self):
        with pytest.raises(ValueError):
            mono.wootters_concurrence(DensityMatrix(np.eye(9) / 9))


class TestFk:
    def test_pure_reduced_matches_ck(self):
        from concurrence_monotones.states import reduced_density

        s = random_pure_state(4, 4, rng_for(42))
        for k in range(1, 5):
            assert mono.f_k(reduced_density(s), k) == pytest.approx(mono.concurrence_k(s, k), rel=1e-10)

    def test_concavity(self):
        for t in range(20):
            rng = rng_for(43, t)
            d = 2 + t % 4
            s1, s2 = random_density(d, rng), random_density(d, rng)
            for k in range(1, d + 1):
                for w in np.arange(1, 10) / 10:
                    mix = DensityMatrix(w * s1.mat + (1 - w) * s2.mat)
                    assert mono.f_k(mix, k) >= w * mono.f_k(s1, k) + (1 - w) * mono.f_k(s2, k) - 1e-10
