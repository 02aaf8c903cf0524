import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from affequil.errors import EnumerationBudgetError, NonFiniteError
from affequil.words import (
    MatrixTuple,
    SymbolPermutation,
    apply_permutation,
    enumerate_words,
    iter_product_levels,
    level_products,
    word_matrix,
    word_rank,
)

from conftest import random_invertible, rel_err


class TestEnumeration:
    def test_n2_l2(self):
        assert list(enumerate_words(2, 2)) == [(1, 1), (1, 2), (2, 1), (2, 2)]

    def test_n4_l1(self):
        assert list(enumerate_words(4, 1)) == [(1,), (2,), (3,), (4,)]

    def test_count_4_10(self):
        assert sum(1 for _ in enumerate_words(4, 10)) == 1_048_576

    def test_total_and_duplicate_free(self):
        words = list(enumerate_words(3, 5))
        assert len(words) == 3**5
        assert len(set(words)) == 3**5
        assert words == sorted(words)

    def test_prefix_partition(self):
        full = list(enumerate_words(3, 4))
        parts = [list(enumerate_words(3, 4, prefix=(a,))) for a in (1, 2, 3)]
        assert sum(parts, []) == full

    def test_budget_overflow(self):
        with pytest.raises(EnumerationBudgetError):
            list(enumerate_words(4, 10, budget=1000))

    def test_word_rank_matches_enumeration(self):
        for rank, word in enumerate(enumerate_words(3, 3)):
            assert word_rank(word, 3) == rank


class TestSymbolPermutation:
    def test_swap(self):
        swap = SymbolPermutation((2, 1))
        assert apply_permutation(swap, (1, 1, 2)) == (2, 2, 1)
        assert swap.order == 2
        assert apply_permutation(swap, apply_permutation(swap, (1, 2, 2))) == (1, 2, 2)

    def test_identity(self):
        iota = SymbolPermutation.identity(4)
        assert iota((3, 1, 4)) == (3, 1, 4)
        assert iota.order == 1

    def test_rejects_non_bijection(self):
        with pytest.raises(ValueError):
            SymbolPermutation((1, 1, 3))

    def test_order_of_cycle(self):
        cyc = SymbolPermutation((2, 3, 1, 4))
        assert cyc.order == 3
        assert cyc.power(3)((1, 2, 3, 4)) == (1, 2, 3, 4)

    @pytest.mark.parametrize("n", [2, 3])
    def test_bijective_on_levels(self, n):
        iota = SymbolPermutation(tuple(range(2, n + 1)) + (1,))
        for length in range(1, 7):
            words = list(enumerate_words(n, length))
            images = {apply_permutation(iota, w) for w in words}
            assert images == set(words)


class TestWordMatrix:
    def test_length_one(self, thm1):
        assert np.array_equal(word_matrix(thm1.linear, (2,)), np.asarray(thm1.linear[2]))

    def test_empty_word_is_identity(self, thm1):
        assert np.array_equal(word_matrix(thm1.linear, ()), np.eye(4))

    @given(st.integers(0, 10**6), st.integers(1, 5), st.integers(1, 5))
    @settings(max_examples=40, deadline=None)
    def test_concatenation_homomorphism(self, seed, n1, n2):
        rng = np.random.default_rng(seed)
        T = MatrixTuple(tuple(random_invertible(rng, 3) for _ in range(2)))
        w1 = tuple(int(a) for a in rng.integers(1, 3, size=n1))
        w2 = tuple(int(a) for a in rng.integers(1, 3, size=n2))
        lhs = word_matrix(T, w1 + w2)
        rhs = word_matrix(T, w1) @ word_matrix(T, w2)
        scale = np.linalg.norm(rhs) + 1e-300
        assert float(np.abs(lhs - rhs).max()) / scale < 1e-12

    def test_kronecker_compatibility(self, thm1):
        # word products of B_i (x) B_{iota(i)} split as B_w (x) B_{iota(w)}
        base, iota = thm1.base, thm1.iota
        pair = base.kron_pair(iota)
        for word in [(1,), (2, 1), (1, 2, 2, 1), (2, 2, 1, 1, 2)]:
            lhs = word_matrix(pair, word)
            rhs = np.kron(
                word_matrix(base, word), word_matrix(base, iota(word))
            )
            assert rel_err(lhs, rhs) < 1e-12

    def test_overflow_guard(self):
        big = MatrixTuple((1e100 * np.eye(2), 1e100 * np.eye(2)))
        with pytest.raises(NonFiniteError):
            word_matrix(big, (1, 1, 1, 1))

    def test_underflow_guard(self):
        tiny = MatrixTuple((1e-120 * np.eye(2), 1e-120 * np.eye(2)))
        with pytest.raises(NonFiniteError):
            word_matrix(tiny, (1, 1, 1))


class TestProductLevels:
    def test_levels_match_word_matrix(self, thm1):
        for m, stack in iter_product_levels(thm1.linear, 3):
            for idx, word in enumerate(enumerate_words(2, m)):
                assert np.array_equal(stack[idx], word_matrix(thm1.linear, word))

    def test_level_products_shape(self, thm2):
        stack = level_products(thm2.linear, 3)
        assert stack.shape == (64, 4, 4)

    def test_budget(self, thm2):
        with pytest.raises(EnumerationBudgetError):
            level_products(thm2.linear, 5, budget=100)


class TestMatrixTuple:
    def test_rejects_mixed_dims(self):
        with pytest.raises(ValueError):
            MatrixTuple((np.eye(2), np.eye(3)))

    def test_rejects_singular(self):
        from affequil.errors import SingularMatrixError

        with pytest.raises(SingularMatrixError):
            MatrixTuple((np.eye(2), np.zeros((2, 2))))

    def test_permuted(self, thm1):
        swapped = thm1.base.permuted(thm1.iota)
        assert np.array_equal(np.asarray(swapped[1]), np.asarray(thm1.base[2]))
        assert np.array_equal(np.asarray(swapped[2]), np.asarray(thm1.base[1]))

    def test_norms(self, thm2):
        assert rel_err(thm2.linear.norms(), [0.44] * 4) < 1e-12
