import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from affequil.errors import OutOfRangeSError
from affequil.fixtures import kron_pair_base
from affequil.linalg import phi_s, singular_values
from affequil.potentials import (
    FactorPotential,
    NormProductPotential,
    PhiSPotential,
    dualize,
    factor_pair,
    max_identity_check,
)
from affequil.pressure import log_level_sum
from affequil.words import (
    MatrixTuple,
    SymbolPermutation,
    enumerate_words,
    word_matrix,
)

from conftest import random_invertible, rel_err


def random_base_pair(seed, min_condition=0.3):
    # well-conditioned contracting pairs: |det| of short word products must
    # clear the phi_s invertibility guard
    rng = np.random.default_rng(seed)
    mats = []
    for shrink in (1.2, 1.1):
        B = random_invertible(rng, 2, min_condition)
        mats.append(B / (shrink * np.linalg.svd(B, compute_uv=False)[0]))
    return MatrixTuple(tuple(mats)), SymbolPermutation((2, 1))


class TestPhiSPotential:
    def test_s_zero_is_one(self, thm1):
        pot = PhiSPotential(thm1.linear, 0.0)
        for word in [(1,), (2, 1), (1, 1, 2)]:
            assert pot.eval(word) == pytest.approx(1.0, rel=1e-12)

    def test_matches_phi_s_of_product(self, thm1):
        pot = PhiSPotential(thm1.linear, 1.7)
        word = (1, 2, 2, 1)
        assert pot.eval(word) == pytest.approx(
            phi_s(word_matrix(thm1.linear, word), 1.7), rel=1e-12
        )

    def test_level_values_in_lex_order(self, thm1):
        pot = PhiSPotential(thm1.linear, 1.5)
        values = pot.level_log_values(4)
        for idx, word in enumerate(enumerate_words(2, 4)):
            assert values[idx] == pytest.approx(pot.log_eval(word), rel=1e-12)

    def test_rejects_negative_s(self, thm1):
        with pytest.raises(OutOfRangeSError):
            PhiSPotential(thm1.linear, -0.5)


class TestNormProduct:
    def test_single_tuple_is_norm(self, thm1):
        pot = NormProductPotential([thm1.linear], [1.0])
        word = (2, 1, 1)
        expected = singular_values(word_matrix(thm1.linear, word))[0]
        assert pot.eval(word) == pytest.approx(expected, rel=1e-12)

    def test_rejects_mismatched_alphabets(self, thm1, thm2):
        with pytest.raises(ValueError):
            NormProductPotential([thm1.linear, thm2.linear], [1.0, 1.0])

    def test_rejects_nonpositive_beta(self, thm1):
        with pytest.raises(ValueError):
            NormProductPotential([thm1.linear], [0.0])

    @given(st.integers(0, 10**6))
    @settings(max_examples=25, deadline=None)
    def test_submultiplicative(self, seed):
        base, _ = random_base_pair(seed)
        pot = NormProductPotential([base, base.exterior(2)], [1.3, 0.4])
        rng = np.random.default_rng(seed + 1)
        w1 = tuple(int(a) for a in rng.integers(1, 3, size=4))
        w2 = tuple(int(a) for a in rng.integers(1, 3, size=3))
        assert pot.eval(w1 + w2) <= (1 + 1e-10) * pot.eval(w1) * pot.eval(w2)


class TestFactorPotentials:
    def test_requires_s_in_range(self, thm1):
        for bad in (0.5, 1.0, 2.5):
            with pytest.raises(OutOfRangeSError):
                FactorPotential(thm1.base, thm1.iota, bad)

    def test_single_letter_value(self, thm1):
        # rotation factor has unit norms, so F1((1)) = 0.44^1.5
        f1 = FactorPotential(thm1.base, thm1.iota, 1.5, which=1)
        assert f1.eval((1,)) == pytest.approx(0.44**1.5, rel=1e-10)

    def test_which2_is_which1_after_relabel(self, thm1):
        f1, f2 = factor_pair(thm1.base, thm1.iota, 1.5)
        rng = np.random.default_rng(9)
        for _ in range(20):
            word = tuple(int(a) for a in rng.integers(1, 3, size=rng.integers(1, 9)))
            assert f2.eval(word) == pytest.approx(f1.eval(thm1.iota(word)), rel=1e-12)

    def test_level_sum_symmetry(self, thm1):
        f1, f2 = factor_pair(thm1.base, thm1.iota, 1.4)
        for n in range(1, 13):
            s1 = log_level_sum(f1.level_log_values(n))
            s2 = log_level_sum(f2.level_log_values(n))
            assert abs(s1 - s2) <= 1e-12

    def test_s_equal_two_supported(self, thm1):
        f1 = FactorPotential(thm1.base, thm1.iota, 2.0, which=1)
        # at s = 2 the middle exponent vanishes: F1 = ||B_w||^2 |det B_{iota(w)}|
        word = (1, 2)
        Bw = word_matrix(thm1.base, word)
        Biw = word_matrix(thm1.base, thm1.iota(word))
        expected = np.linalg.norm(Bw, 2) ** 2 * abs(np.linalg.det(Biw))
        assert f1.eval(word) == pytest.approx(expected, rel=1e-10)

    @given(st.integers(0, 10**6))
    @settings(max_examples=25, deadline=None)
    def test_submultiplicative(self, seed):
        base, iota = random_base_pair(seed)
        f1 = FactorPotential(base, iota, 1.6, which=1)
        rng = np.random.default_rng(seed + 1)
        w1 = tuple(int(a) for a in rng.integers(1, 3, size=5))
        w2 = tuple(int(a) for a in rng.integers(1, 3, size=4))
        assert f1.eval(w1 + w2) <= (1 + 1e-10) * f1.eval(w1) * f1.eval(w2)


class TestMaxIdentity:
    def test_fixture_single_letter(self, thm1):
        chk = max_identity_check(thm1.base, thm1.iota, 1.5, (1,))
        assert chk.holds
        assert chk.value == pytest.approx(0.44 * 0.44**0.5, rel=1e-10)
        assert chk.factor1 == pytest.approx(0.44**1.5, rel=1e-10)
        assert chk.factor1 > chk.factor2

    def test_orthogonal_second_factor_reduction(self, thm1):
        # with B2 orthogonal, sigma_2 of B_w (x) B_{iota(w)} is the larger of
        # the two cross products of leading singular values
        base, iota = thm1.base, thm1.iota
        pair = base.kron_pair(iota)
        rng = np.random.default_rng(3)
        for _ in range(20):
            word = tuple(int(a) for a in rng.integers(1, 3, size=rng.integers(1, 8)))
            sv = singular_values(word_matrix(pair, word))
            b = singular_values(word_matrix(base, word))
            bi = singular_values(word_matrix(base, iota(word)))
            assert sv[1] == pytest.approx(max(b[0] * bi[1], b[1] * bi[0]), rel=1e-9)

    def test_exhaustive_small_levels(self, thm1):
        for s in (1.2, 2.0):
            for n in range(1, 7):
                for word in enumerate_words(2, n):
                    assert max_identity_check(thm1.base, thm1.iota, s, word).holds

    @given(st.integers(0, 10**6))
    @settings(max_examples=20, deadline=None)
    def test_random_bases(self, seed):
        base, iota = random_base_pair(seed)
        rng = np.random.default_rng(seed + 2)
        word = tuple(int(a) for a in rng.integers(1, 3, size=int(rng.integers(1, 5))))
        assert max_identity_check(base, iota, 1.5, word).holds


class TestDualize:
    def test_range_check(self, thm1):
        for bad in (0.5, 1.0, 3.0, 4.0):
            with pytest.raises(OutOfRangeSError):
                dualize(thm1.base, thm1.iota, bad)

    def test_self_dual_midpoint(self, thm1):
        dual = dualize(thm1.base, thm1.iota, 2.0)
        assert dual.dual_s == 2.0
        A = thm1.base.kron_pair(thm1.iota)
        Ad = dual.dual_tuple.kron_pair(thm1.iota)
        for word in enumerate_words(2, 4):
            lhs = phi_s(word_matrix(A, word), 2.0)
            rhs = phi_s(word_matrix(Ad, word), 2.0)
            assert lhs == pytest.approx(rhs, rel=1e-9)

    def test_orthogonal_fixed_point(self):
        theta = 0.7
        c, s = math.cos(theta), math.sin(theta)
        R = np.array([[c, -s], [s, c]])
        base = MatrixTuple((R, R.T))
        dual = dualize(base, SymbolPermutation((2, 1)), 2.5)
        for orig, img in zip(base.matrices, dual.dual_tuple.matrices):
            assert rel_err(orig, img) < 1e-12

    def test_phi_equality_on_words(self, thm1):
        dual = dualize(thm1.base, thm1.iota, 2.5)
        assert dual.dual_s == pytest.approx(1.5)
        A = thm1.base.kron_pair(thm1.iota)
        Ad = dual.dual_tuple.kron_pair(thm1.iota)
        for n in range(1, 7):
            for word in enumerate_words(2, n):
                lhs = phi_s(word_matrix(A, word), 2.5)
                rhs = phi_s(word_matrix(Ad, word), 1.5)
                assert abs(lhs - rhs) <= 1e-8 * max(lhs, rhs)

    def test_round_trip(self, thm1):
        # the fold is an involution: dualizing the dual at dual_s restores
        # the original matrices, hence all word-phi values
        dual = dualize(thm1.base, thm1.iota, 2.5)
        double = dualize(dual.dual_tuple, thm1.iota, dual.dual_s)
        assert double.dual_s == pytest.approx(2.5)
        for orig, back in zip(thm1.base.matrices, double.dual_tuple.matrices):
            assert rel_err(orig, back) < 1e-12
        A = thm1.base.kron_pair(thm1.iota)
        Add = double.dual_tuple.kron_pair(thm1.iota)
        for word in enumerate_words(2, 5):
            lhs = phi_s(word_matrix(A, word), 2.5)
            rhs = phi_s(word_matrix(Add, word), 2.5)
            assert abs(lhs - rhs) <= 1e-8 * max(lhs, rhs)
