import math

import numpy as np
import pytest

from sparseconv.fft import cyclic_convolve
from sparseconv.hashing import fold, fold_sparse, is_isolated, primes_in_range, sample_prime
from sparseconv.numerics import naive_convolve


def chi2_critical(df: int, z: float = 3.0902) -> float:
    """Wilson-Hilferty approximation of the chi-square quantile; z=3.0902
    corresponds to the 0.999 level."""
    c = 2.0 / (9.0 * df)
    return df * (1.0 - c + z * math.sqrt(c)) ** 3


class TestSamplePrime:
    def test_small_ranges(self):
        rng = np.random.default_rng(0)
        assert {sample_prime(2, rng) for _ in range(40)} <= {2, 3}
        assert {sample_prime(10, rng) for _ in range(80)} == {11, 13, 17, 19}

    def test_primality(self):
        rng = np.random.default_rng(1)
        for m in (16, 100, 5000):
            p = sample_prime(m, rng)
            assert m <= p <= 2 * m
            assert all(p % q for q in range(2, int(p**0.5) + 1))

    def test_m_too_small(self):
        with pytest.raises(ValueError):
            primes_in_range(1)

    def test_uniform_over_primes(self):
        # 10^4 draws from the primes in [10^6, 2*10^6], chi-square over
        # equal-count bins at the 0.001 level
        m = 10**6
        primes = primes_in_range(m)
        rng = np.random.default_rng(2)
        draws = np.array([sample_prime(m, rng) for _ in range(10**4)])
        n_bins = 50
        edges = primes[np.linspace(0, len(primes), n_bins + 1).astype(int)[1:-1]]
        counts = np.bincount(np.searchsorted(edges, draws, side="right"), minlength=n_bins)
        # bins hold equal prime counts up to rounding; expected is uniform
        expected = len(draws) / n_bins
        chi2 = float(np.sum((counts - expected) ** 2 / expected))
        assert chi2 < chi2_critical(n_bins - 1)


class TestFold:
    def test_identity_when_p_large(self):
        a = np.array([3.0, 1, 2, 1, 2, 1, 1])
        out = fold(a, 9)
        assert out.tolist() == [3, 1, 2, 1, 2, 1, 1, 0, 0]

    def test_bucket_sums_mod_3(self):
        # residues mod 3 of indices 0..6 are 0,1,2,0,1,2,0
        out = fold(np.array([3.0, 1, 2, 1, 2, 1, 1]), 3)
        assert out.tolist() == [3 + 1 + 1, 1 + 2, 2 + 1]

    def test_zero_fixed_point(self):
        assert fold(np.zeros(10), 3).tolist() == [0, 0, 0]

    def test_mass_preserved_exactly_on_integers(self):
        rng = np.random.default_rng(3)
        for _ in range(30):
            n = int(rng.integers(1, 200))
            p = int(rng.integers(1, 40))
            a = rng.integers(0, 50, n).astype(float)
            assert fold(a, p).sum() == a.sum()

    def test_matches_direct_bucketing(self):
        rng = np.random.default_rng(4)
        for _ in range(30):
            n = int(rng.integers(1, 100))
            p = int(rng.integers(1, 20))
            a = rng.random(n)
            direct = np.zeros(p)
            for j, v in enumerate(a):
                direct[j % p] += v
            np.testing.assert_allclose(fold(a, p), direct, atol=1e-12)


class TestFoldSparse:
    def test_matches_dense_fold(self):
        dense = np.zeros(50)
        entries = {3: 2.0, 17: 5.0, 44: 1.5}
        for i, v in entries.items():
            dense[i] = v
        np.testing.assert_allclose(
            fold_sparse(entries.keys(), entries.values(), 7, 50), fold(dense, 7), atol=1e-12
        )

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            fold_sparse([50], [1.0], 7, 50)


class TestIsIsolated:
    def test_singleton(self):
        assert is_isolated(3, {3}, 5)

    def test_collision(self):
        assert not is_isolated(3, {3, 10}, 7)

    def test_no_collision(self):
        assert is_isolated(3, {3, 11}, 7)

    def test_requires_membership(self):
        with pytest.raises(ValueError):
            is_isolated(4, {3}, 7)


def test_fold_commutes_with_convolution():
    # fold(A*B, p) equals cyclic conv of the folds, for all small primes
    rng = np.random.default_rng(5)
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        for _ in range(5):
            n = int(rng.integers(2, 65))
            a, b = rng.random(n) * 4, rng.random(n) * 4
            lhs = fold(naive_convolve(a, b), p)
            rhs = cyclic_convolve(fold(a, p), fold(b, p), p)
            np.testing.assert_allclose(lhs, rhs, atol=1e-8)


def test_universality_bound():
    # collision frequency of fixed distinct keys stays below
    # 2*log2(U)/m times a 1.5 slack
    U = 2**20
    m = 64 * 20
    primes = primes_in_range(m)
    rng = np.random.default_rng(6)
    bound = 2 * math.log2(U) / m * 1.5
    for x, y in [(0, 1283), (12345, 999999), (7, 2 * 1289 + 7)]:
        draws = primes[rng.integers(len(primes), size=10**4)]
        freq = float(np.mean((x % draws) == (y % draws)))
        assert freq <= bound, (x, y, freq, bound)
