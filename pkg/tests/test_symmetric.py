from math import comb

import numpy as np
import pytest

from concurrence_monotones.errors import InconsistentMonotonesError
from concurrence_monotones.monotones import monotones_of_spectrum
from concurrence_monotones.sampling import random_density, random_spectrum, rng_for
from concurrence_monotones.symmetric import (
    PARTITION_CAP,
    char_poly_coefficients,
    compound_trace,
    elementary_symmetric,
    enumerate_partitions,
    esf_all,
    esf_from_power_sums,
    power_sums,
    schmidt_from_monotones,
)

from helpers import brute_esf

PARTITION_COUNTS = [1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]


class TestElementary:
    def test_symmetric_point(self):
        assert elementary_symmetric([1 / 3] * 3, 2) == pytest.approx(1 / 3)

    def test_small_integers(self):
        assert elementary_symmetric([1, 2, 3], 2) == pytest.approx(11)

    def test_k_zero(self):
        assert elementary_symmetric([0.3, 0.7], 0) == 1.0

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            elementary_symmetric([1, 2], 3)
        with pytest.raises(ValueError):
            elementary_symmetric([1, 2], -1)

    def test_against_brute_force(self):
        rng = rng_for(20)
        for _ in range(20):
            v = rng.random(6)
            e = esf_all(v)
            for k in range(7):
                assert e[k] == pytest.approx(brute_esf(v, k), rel=1e-12)


class TestPowerSums:
    def test_k2(self):
        t2 = 0.4
        assert esf_from_power_sums([1.0, t2], 2) == pytest.approx((1 - t2) / 2)

    def test_k3(self):
        t2, t3 = 0.4, 0.1
        assert esf_from_power_sums([1.0, t2, t3], 3) == pytest.approx((1 - 3 * t2 + 2 * t3) / 6)

    def test_random_d6_k5(self):
        lam = random_spectrum(6, rng_for(21))
        p = [np.sum(lam**m) for m in range(1, 6)]
        assert esf_from_power_sums(p, 5) == pytest.approx(brute_esf(lam, 5), abs=1e-10)

    def test_insufficient(self):
        with pytest.raises(ValueError):
            esf_from_power_sums([1.0], 2)

    def test_matrix_power_sums(self):
        rho = random_density(4, rng_for(22))
        ev = np.linalg.eigvalsh(rho.mat)
        got = power_sums(rho.mat, 4)
        assert np.allclose(np.asarray(got, dtype=float), [np.sum(ev**m) for m in range(1, 5)])


class TestCompound:
    def test_diag(self):
        assert compound_trace(np.diag([1.0, 2.0, 3.0]), 2) == pytest.approx(11)

    def test_identity(self):
        for d in range(1, 7):
            for k in range(d + 1):
                assert compound_trace(np.eye(d), k) == pytest.approx(comb(d, k))

    def test_random_psd(self):
        rho = random_density(4, rng_for(23))
        ev = np.linalg.eigvalsh(rho.mat)
        for method in ("minors", "eigen", "auto"):
            assert compound_trace(rho.mat, 3, method) == pytest.approx(elementary_symmetric(ev, 3), abs=1e-9)

    def test_k_out_of_range(self):
        with pytest.raises(ValueError):
            compound_trace(np.eye(3), 4)


class TestPartitions:
    @pytest.mark.parametrize("k,count", list(enumerate(PARTITION_COUNTS, start=1)))
    def test_counts(self, k, count):
        terms = enumerate_partitions(k)
        assert len(terms) == count
        for t in terms:
            assert sum((i + 1) * n for i, n in enumerate(t.counts)) == k

    def test_k2_terms(self):
        shapes = {tuple(t.counts) for t in enumerate_partitions(2)}
        assert shapes == {(0, 1), (2, 0)}

    def test_k1(self):
        (t,) = enumerate_partitions(1)
        assert tuple(t.counts) == (1,)

    def test_cap(self):
        with pytest.raises(ValueError):
            enumerate_partitions(PARTITION_CAP + 1)
        with pytest.raises(ValueError):
            enumerate_partitions(0)

    def test_weights_reproduce_newton(self):
        # sum over partitions of sign * weight * prod p_m^N_m equals brute-force S_k
        rng = rng_for(24)
        v = rng.random(8)
        for k in range(1, 9):
            p = [np.sum(v**m) for m in range(1, k + 1)]
            assert esf_from_power_sums(p, k) == pytest.approx(brute_esf(v, k), rel=1e-10)


class TestInverse:
    def test_char_poly(self):
        lam = np.array([0.5, 0.3, 0.2])
        c = monotones_of_spectrum(lam)
        assert np.allclose(np.sort(np.roots(char_poly_coefficients(c, 3)).real), np.sort(lam))

    def test_d2_maximal(self):
        assert np.allclose(schmidt_from_monotones([1, 1], 2), [0.5, 0.5])

    def test_d3_product(self):
        assert np.allclose(schmidt_from_monotones([1, 0, 0], 3), [1, 0, 0], atol=1e-12)

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_roundtrip(self, d):
        for t in range(30):
            lam = random_spectrum(d, rng_for(25, d, t))
            back = schmidt_from_monotones(monotones_of_spectrum(lam), d)
            assert np.max(np.abs(back - lam)) < 1e-8

    def test_inconsistent(self):
        # C_2 = 0 forces a product spectrum, which is incompatible with C_3 = 1
        with pytest.raises(InconsistentMonotonesError):
            schmidt_from_monotones([1, 0.0, 1.0], 3)
