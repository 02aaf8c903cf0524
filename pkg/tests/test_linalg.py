import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from affequil.errors import BadRankError, NonFiniteError, SingularMatrixError
from affequil.linalg import (
    eigen_moduli,
    exterior_power,
    kronecker,
    phi_s,
    phi_s_via_exterior,
    singular_values,
)

from conftest import random_invertible, rel_err


def rotation(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


class TestSingularValues:
    def test_identity(self):
        assert np.allclose(singular_values(np.eye(4)), np.ones(4))

    def test_diagonal_moduli(self):
        assert np.allclose(singular_values(np.diag([3.0, -2.0])), [3.0, 2.0])

    def test_kron_pair_generator(self, thm1):
        # diag(a1, a2) (x) rotation has singular values (a1, a1, a2, a2)
        sv = singular_values(thm1.linear[1])
        assert rel_err(sv, [0.44, 0.44, 0.2, 0.2]) < 1e-12

    def test_rejects_nan(self):
        with pytest.raises(NonFiniteError):
            singular_values(np.array([[1.0, np.nan], [0.0, 1.0]]))

    @given(st.integers(0, 10**6))
    @settings(max_examples=30, deadline=None)
    def test_sorted_and_det_product(self, seed):
        rng = np.random.default_rng(seed)
        A = random_invertible(rng, 4)
        sv = singular_values(A)
        assert (np.diff(sv) <= 0).all()
        assert rel_err(np.prod(sv), abs(np.linalg.det(A))) < 1e-9


class TestEigenModuli:
    def test_rotation_unit_pair(self):
        assert np.allclose(eigen_moduli(rotation(1.0)), [1.0, 1.0])

    def test_diagonal(self):
        assert np.allclose(eigen_moduli(np.diag([0.44, 0.2])), [0.44, 0.2])

    def test_wedge_square_of_fixture(self, thm1):
        # one modulus a1^2, four a1*a2, one a2^2
        moduli = eigen_moduli(exterior_power(np.asarray(thm1.linear[1]), 2))
        expected = sorted(
            [0.44**2, 0.2**2] + [0.44 * 0.2] * 4, reverse=True
        )
        assert rel_err(moduli, expected) < 1e-10

    @given(st.integers(0, 10**6))
    @settings(max_examples=30, deadline=None)
    def test_product_is_det(self, seed):
        rng = np.random.default_rng(seed)
        A = random_invertible(rng, 3)
        assert rel_err(np.prod(eigen_moduli(A)), abs(np.linalg.det(A))) < 1e-9


class TestKronecker:
    def test_identity(self):
        assert np.array_equal(kronecker(np.eye(2), np.eye(2)), np.eye(4))

    def test_diagonal_block_layout(self):
        K = kronecker(np.diag([2.0, 1.0]), np.diag([3.0, 1.0]))
        assert np.allclose(K, np.diag([6.0, 2.0, 3.0, 1.0]))
        assert np.allclose(singular_values(K), [6.0, 3.0, 2.0, 1.0])

    def test_fixture_block_matrix(self, thm1):
        a1, a2, th = 0.44, 0.2, 1.0
        R = rotation(th)
        expected = np.block(
            [[a1 * R, np.zeros((2, 2))], [np.zeros((2, 2)), a2 * R]]
        )
        assert np.allclose(kronecker(np.diag([a1, a2]), R), expected)
        assert np.allclose(np.asarray(thm1.linear[1]), expected)

    @given(st.integers(0, 10**6))
    @settings(max_examples=30, deadline=None)
    def test_mixed_product_identity(self, seed):
        rng = np.random.default_rng(seed)
        A1, A2 = (random_invertible(rng, 2) for _ in range(2))
        B1, B2 = (random_invertible(rng, 3) for _ in range(2))
        lhs = kronecker(A1, B1) @ kronecker(A2, B2)
        rhs = kronecker(A1 @ A2, B1 @ B2)
        assert rel_err(lhs, rhs) < 1e-10

    @given(st.integers(0, 10**6))
    @settings(max_examples=40, deadline=None)
    def test_spectrum_is_pairwise_products(self, seed):
        rng = np.random.default_rng(seed)
        dA = int(rng.integers(2, 5))
        dB = int(rng.integers(2, 5))
        A = random_invertible(rng, dA)
        B = random_invertible(rng, dB)
        got = singular_values(kronecker(A, B))
        expected = np.sort(np.outer(singular_values(A), singular_values(B)).ravel())[::-1]
        assert rel_err(got, expected) < 1e-9


class TestExteriorPower:
    def test_diagonal(self):
        W = exterior_power(np.diag([3.0, 2.0, 1.0]), 2)
        assert np.allclose(W, np.diag([6.0, 3.0, 2.0]))

    def test_top_power_is_det(self):
        rng = np.random.default_rng(5)
        A = random_invertible(rng, 4)
        W = exterior_power(A, 4)
        assert W.shape == (1, 1)
        assert rel_err(W[0, 0], np.linalg.det(A)) < 1e-10

    def test_bad_rank(self):
        with pytest.raises(BadRankError):
            exterior_power(np.eye(3), 0)
        with pytest.raises(BadRankError):
            exterior_power(np.eye(3), 4)

    def test_norm_is_product_of_two_leading(self):
        rng = np.random.default_rng(11)
        A = random_invertible(rng, 4)
        sv = singular_values(A)
        assert rel_err(singular_values(exterior_power(A, 2))[0], sv[0] * sv[1]) < 1e-10

    @given(st.integers(0, 10**6))
    @settings(max_examples=40, deadline=None)
    def test_spectrum_is_kfold_products(self, seed):
        rng = np.random.default_rng(seed)
        d = int(rng.integers(2, 5))
        k = int(rng.integers(1, d + 1))
        A = random_invertible(rng, d)
        sv = singular_values(A)
        expected = np.sort(
            [np.prod([sv[i] for i in idx]) for idx in itertools.combinations(range(d), k)]
        )[::-1]
        assert rel_err(singular_values(exterior_power(A, k)), expected) < 1e-9

    @given(st.integers(0, 10**6))
    @settings(max_examples=25, deadline=None)
    def test_multiplicative_and_transpose(self, seed):
        rng = np.random.default_rng(seed)
        A = random_invertible(rng, 4)
        B = random_invertible(rng, 4)
        assert rel_err(exterior_power(A @ B, 2), exterior_power(A, 2) @ exterior_power(B, 2)) < 1e-9
        assert rel_err(exterior_power(A.T, 2), exterior_power(A, 2).T) < 1e-12


class TestPhiS:
    def test_identity_is_one(self):
        for s in (0.0, 0.5, 1.0, 2.7, 4.0, 6.0):
            assert phi_s(np.eye(4), s) == pytest.approx(1.0, rel=1e-12)

    def test_fixture_value(self, thm1):
        # spectrum (0.44, 0.44, 0.2, 0.2): phi^1.5 = 0.44 * 0.44^0.5
        assert phi_s(thm1.linear[1], 1.5) == pytest.approx(0.44**1.5, rel=1e-10)

    def test_s2_is_alpha1_squared(self, thm2):
        for i in range(1, 5):
            assert phi_s(thm2.linear[i], 2.0) == pytest.approx(0.44**2, rel=1e-10)

    def test_rejects_singular(self):
        with pytest.raises(SingularMatrixError):
            phi_s(np.array([[1.0, 0.0], [0.0, 0.0]]), 1.5)

    @given(st.integers(0, 10**6), st.sampled_from([0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5]))
    @settings(max_examples=60, deadline=None)
    def test_cross_formula(self, seed, s):
        rng = np.random.default_rng(seed)
        A = random_invertible(rng, 4)
        assert rel_err(phi_s(A, s), phi_s_via_exterior(A, s)) < 1e-9

    @given(st.integers(0, 10**6), st.floats(0.0, 5.0))
    @settings(max_examples=60, deadline=None)
    def test_submultiplicative(self, seed, s):
        rng = np.random.default_rng(seed)
        A = random_invertible(rng, 4)
        B = random_invertible(rng, 4)
        assert phi_s(A @ B, s) <= (1 + 1e-12) * phi_s(A, s) * phi_s(B, s)


class TestGelfand:
    # sigma_i(A^n)^{1/n} -> lambda_i(A); random similarity transforms of a
    # fixed simple spectrum keep every modulus simple and the check
    # conditioned at n = 32.
    @pytest.mark.parametrize("seed", [0, 1, 3, 4, 5])
    def test_monotone_trend_and_final_gap(self, seed):
        mu = np.array([1.0, 0.78, 0.55, 0.4])
        rng = np.random.default_rng(seed)
        S = np.eye(4) + 0.5 * rng.normal(size=(4, 4))
        A = S @ np.diag(mu * rng.choice([-1, 1], size=4)) @ np.linalg.inv(S)
        lam = eigen_moduli(A)
        for i in range(4):
            gaps = []
            for n in (8, 16, 32):
                An = np.linalg.matrix_power(A, n)
                gaps.append(abs(singular_values(An)[i] ** (1.0 / n) - lam[i]) / lam[i])
            assert gaps[0] >= gaps[1] >= gaps[2]
            assert gaps[2] < 0.05
