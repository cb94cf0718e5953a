import numpy as np
import pytest

from sparseconv.harness import InstanceSpec, generate_instance
from sparseconv.hashing import is_isolated
from sparseconv.numerics import SparseResult, naive_convolve, support_ge
from sparseconv.sketch import (
    Sketch,
    SketchCache,
    build_residual_sketch,
    build_sketch,
    extract_candidates,
)


def impulse(n, at):
    v = np.zeros(n)
    v[at] = 1.0
    return v


class TestBuildSketch:
    def test_impulse_pair_p7(self):
        sk = build_sketch(impulse(4, 2), impulse(4, 3), 7)
        v = np.zeros(7)
        v[5] = 1.0
        np.testing.assert_allclose(sk.v, v, atol=1e-9)
        np.testing.assert_allclose(sk.w, 5 * v, atol=1e-9)

    def test_impulse_pair_p5_wraps(self):
        sk = build_sketch(impulse(4, 2), impulse(4, 3), 5)
        v = np.zeros(5)
        v[0] = 1.0  # true index 5 lands on bucket 5 mod 5
        np.testing.assert_allclose(sk.v, v, atol=1e-9)
        np.testing.assert_allclose(sk.w, 5 * v, atol=1e-9)

    def test_zero_inputs(self):
        sk = build_sketch(np.zeros(6), np.zeros(6), 7)
        np.testing.assert_allclose(sk.v, 0.0, atol=1e-12)
        np.testing.assert_allclose(sk.w, 0.0, atol=1e-12)

    def test_routes_agree(self):
        rng = np.random.default_rng(10)
        for _ in range(10):
            n = int(rng.integers(4, 40))
            a, b = rng.random(n) * 3, rng.random(n) * 3
            for p in (7, 31, 2 * n + 5):
                cyclic = build_sketch(a, b, p, force_cyclic=True)
                auto = build_sketch(a, b, p)
                np.testing.assert_allclose(auto.v, cyclic.v, atol=1e-8)
                np.testing.assert_allclose(auto.w, cyclic.w, atol=1e-8)

    def test_matches_folded_product(self):
        # V must equal the fold of the true product; W the fold of its
        # index-weighted version
        from sparseconv.hashing import fold

        rng = np.random.default_rng(11)
        for p in (3, 7, 13, 29):
            n = 24
            a, b = rng.random(n), rng.random(n)
            c = naive_convolve(a, b)
            sk = build_sketch(a, b, p, force_cyclic=True)
            np.testing.assert_allclose(sk.v, fold(c, p), atol=1e-9)
            np.testing.assert_allclose(sk.w, fold(np.arange(len(c)) * c, p), atol=1e-9)

    def test_nonnegative_up_to_roundoff(self):
        rng = np.random.default_rng(12)
        for _ in range(10):
            n = int(rng.integers(2, 64))
            a, b = rng.random(n) * 10, rng.random(n) * 10
            sk = build_sketch(a, b, 13, force_cyclic=True)
            assert sk.v.min() >= -1e-6


class TestExtractCandidates:
    def test_isolated_impulse(self):
        sk = build_sketch(impulse(4, 2), impulse(4, 3), 7)
        cands = extract_candidates(sk, c1=0.5, tau=0.25, out_len=7)
        assert [(c.index, c.value) for c in cands] == [(5, pytest.approx(1.0, abs=1e-9))]

    def test_colliding_pair_rejected(self):
        # equal masses at true indices 3 and 10 share bucket 3 mod 7;
        # ratio (3+10)/2 = 6.5 sits half-way between integers
        v = np.zeros(7)
        w = np.zeros(7)
        v[3] = 2.0
        w[3] = 13.0
        assert extract_candidates(Sketch(7, v, w), 0.5, 0.25, 21) == []

    def test_all_zero_sketch(self):
        assert extract_candidates(Sketch(5, np.zeros(5), np.zeros(5)), 0.5, 0.25, 9) == []

    def test_out_of_range_index_rejected(self):
        v = np.zeros(7)
        w = np.zeros(7)
        v[2] = 1.0
        w[2] = 30.0  # ratio 30 beyond out_len
        assert extract_candidates(Sketch(7, v, w), 0.5, 0.25, 21) == []

    def test_parameter_validation(self):
        sk = Sketch(3, np.zeros(3), np.zeros(3))
        with pytest.raises(ValueError):
            extract_candidates(sk, 0.0, 0.25, 5)
        with pytest.raises(ValueError):
            extract_candidates(sk, 0.5, 0.5, 5)

    def test_isolated_indices_recovered_exactly(self):
        # brute-force soundness: on noise-free instances every isolated
        # index must surface with its true value
        rng = np.random.default_rng(13)
        for p in (11, 17, 23, 31):
            n = 40
            a = np.zeros(n)
            b = np.zeros(n)
            a[rng.choice(n, 4, replace=False)] = rng.integers(1, 8, 4)
            b[rng.choice(n, 4, replace=False)] = rng.integers(1, 8, 4)
            c = naive_convolve(a, b)
            supp = support_ge(c, 0.5)
            sk = build_sketch(a, b, p, force_cyclic=True)
            got = {cand.index: cand.value for cand in extract_candidates(sk, 0.5, 0.25, len(c))}
            for x in supp:
                if is_isolated(x, supp, p):
                    assert x in got
                    assert abs(got[x] - c[x]) <= 1e-6


class TestResidualSketch:
    def test_perfect_residual_is_zero(self):
        rng = np.random.default_rng(14)
        n = 32
        a = np.zeros(n)
        b = np.zeros(n)
        a[rng.choice(n, 3, replace=False)] = [2, 5, 1]
        b[rng.choice(n, 3, replace=False)] = [4, 1, 3]
        c = naive_convolve(a, b)
        full = SparseResult({int(i): float(c[i]) for i in np.flatnonzero(c)})
        sk = build_residual_sketch(a, b, full, 13)
        assert np.max(np.abs(sk.v)) <= 1e-6
        assert np.max(np.abs(sk.w)) <= 1e-5

    def test_empty_residual_equals_plain_sketch(self):
        rng = np.random.default_rng(15)
        a, b = rng.random(20), rng.random(20)
        plain = build_sketch(a, b, 11)
        resid = build_residual_sketch(a, b, SparseResult(), 11)
        np.testing.assert_array_equal(plain.v, resid.v)
        np.testing.assert_array_equal(plain.w, resid.w)

    def test_missing_entry_leaves_its_mass(self):
        rng = np.random.default_rng(16)
        n = 32
        a = np.zeros(n)
        b = np.zeros(n)
        a[[3, 9, 20]] = [2, 5, 1]
        b[[1, 7, 15]] = [4, 1, 3]
        c = naive_convolve(a, b)
        entries = {int(i): float(c[i]) for i in np.flatnonzero(c)}
        dropped = sorted(entries)[2]
        val = entries.pop(dropped)
        sk = build_residual_sketch(a, b, SparseResult(entries), 13)
        assert abs(sk.v[dropped % 13] - val) <= 1e-6

    def test_out_of_range_partial_result(self):
        with pytest.raises(ValueError):
            build_residual_sketch(np.ones(4), np.ones(4), SparseResult({7: 1.0}), 5)


def test_noise_stays_well_inside_tolerances():
    # noisy instance at n = 2^10: isolated-bucket ratios drift from the
    # true index by far less than tau/2 and values by less than 0.01
    spec = InstanceSpec(n=2**10, s_a=4, s_b=4, seed=21)
    inst = generate_instance(spec)
    c = naive_convolve(inst.a, inst.b)
    supp = support_ge(c, inst.c1_effective)
    cache = SketchCache(inst.a, inst.b)
    checked = 0
    for p in (1031, 1033, 1039, 1049):
        sk = build_sketch(inst.a, inst.b, p, cache=cache, force_cyclic=True)
        for x in supp:
            if not is_isolated(x, supp, p):
                continue
            ratio = sk.w[x % p] / sk.v[x % p]
            assert abs(ratio - x) <= 0.25 / 2
            assert abs(sk.v[x % p] - c[x]) <= 0.01
            checked += 1
    assert checked > 0
