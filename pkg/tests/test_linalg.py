import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bftmimo.linalg import (
    RngStream,
    SingularMatrixError,
    conj,
    conj_transpose,
    draw_cn_matrix,
    frob_norm_sq,
    invert_small,
    matmul,
    stable_mean,
    trace,
    transpose,
)

from conftest import crandn


def naive_matmul(a, b):
    out = np.zeros((a.shape[0], b.shape[1]), dtype=complex)
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            for k in range(a.shape[1]):
                out[i, j] += a[i, k] * b[k, j]
    return out


class TestDrawCN:
    def test_second_moment(self):
        z = draw_cn_matrix(RngStream(3, 0), 316, 317, 1.0)
        p = np.abs(z) ** 2
        assert 0.99 <= p.mean() <= 1.01

    def test_zero_mean(self):
        z = draw_cn_matrix(RngStream(3, 1), 316, 317, 1.0).ravel()
        se = np.sqrt(np.mean(np.abs(z) ** 2) / z.size)
        assert abs(z.mean()) < 3 * se

    def test_real_imag_split(self):
        z = draw_cn_matrix(RngStream(5, 0), 400, 250, 2.0).ravel()
        band = 3 * np.sqrt(2.0) * 1.0 / np.sqrt(z.size)
        assert abs(z.real.var() - 1.0) < band
        assert abs(z.imag.var() - 1.0) < band
        assert abs(np.corrcoef(z.real, z.imag)[0, 1]) < 3 / np.sqrt(z.size)

    def test_deterministic(self):
        a = draw_cn_matrix(RngStream(99, 7), 4, 3, 0.5)
        b = draw_cn_matrix(RngStream(99, 7), 4, 3, 0.5)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, draw_cn_matrix(RngStream(99, 8), 4, 3, 0.5))

    @pytest.mark.parametrize("variance", [0.0, -1.0])
    def test_rejects_nonpositive_variance(self, variance):
        with pytest.raises(ValueError):
            draw_cn_matrix(RngStream(0, 0), 2, 2, variance)


class TestMatmul:
    def test_identity(self, rng):
        a = crandn(rng, 3, 4)
        assert np.array_equal(matmul(a, np.eye(4)), a)

    def test_diagonal(self):
        a = np.array([[1 + 1j, 0], [0, 1]])
        b = np.array([[1, 0], [0, 2]])
        assert np.array_equal(matmul(a, b), np.array([[1 + 1j, 0], [0, 2]]))

    def test_against_triple_loop(self, rng):
        a, b = crandn(rng, 3, 4), crandn(rng, 4, 2)
        assert np.max(np.abs(matmul(a, b) - naive_matmul(a, b))) < 1e-12

    def test_mismatch(self, rng):
        with pytest.raises(ValueError):
            matmul(crandn(rng, 3, 4), crandn(rng, 3, 4))


class TestTransposes:
    def test_involutions(self, rng):
        a = crandn(rng, 3, 5)
        assert np.array_equal(conj_transpose(conj_transpose(a)), a)
        assert np.array_equal(transpose(transpose(a)), a)
        assert np.array_equal(conj(conj(a)), a)

    def test_product_rule(self, rng):
        a, b = crandn(rng, 3, 3), crandn(rng, 3, 3)
        lhs = conj_transpose(matmul(a, b))
        rhs = matmul(conj_transpose(b), conj_transpose(a))
        assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_scalar(self):
        assert transpose(np.array([[2 + 3j]]))[0, 0] == 2 + 3j


class TestInvertSmall:
    def test_diagonal(self):
        inv = invert_small(np.diag([2.0, 4.0]))
        assert np.allclose(inv, np.diag([0.5, 0.25]), rtol=0, atol=1e-15)

    def test_identity(self):
        assert np.array_equal(invert_small(np.eye(3)), np.eye(3))

    def test_residual(self, rng):
        a = crandn(rng, 5, 5) + 5 * np.eye(5)
        assert np.linalg.norm(a @ invert_small(a) - np.eye(5)) < 1e-10

    def test_needs_pivoting(self):
        a = np.array([[0, 1], [1, 0]], dtype=complex)
        assert np.array_equal(invert_small(a), a)

    def test_batched_matches_lapack(self, rng):
        a = crandn(rng, 20, 6, 6)
        assert np.max(np.abs(invert_small(a) - np.linalg.inv(a))) < 1e-10

    def test_singular(self):
        with pytest.raises(SingularMatrixError):
            invert_small(np.array([[1, 2], [2, 4]], dtype=complex))

    def test_not_square(self, rng):
        with pytest.raises(ValueError):
            invert_small(crandn(rng, 2, 3))

    @settings(max_examples=50, deadline=None)
    @given(n=st.integers(1, 12), seed=st.integers(0, 2**32 - 1))
    def test_residual_property(self, n, seed):
        a = crandn(np.random.default_rng(seed), n, n)
        if np.linalg.cond(a) >= 1e8:
            return
        assert np.linalg.norm(a @ invert_small(a) - np.eye(n)) < 1e-10


class TestTraceNorm:
    def test_trace_identity(self):
        assert trace(np.eye(3)) == 3

    def test_frob(self):
        assert frob_norm_sq(np.array([[3, 4j]])) == 25

    def test_trace_cyclic(self, rng):
        a, b = crandn(rng, 3, 4), crandn(rng, 4, 3)
        assert abs(trace(a @ b) - trace(b @ a)) < 1e-12

    def test_trace_non_square(self, rng):
        with pytest.raises(ValueError):
            trace(crandn(rng, 2, 3))


def test_stable_mean_is_order_insensitive(rng):
    x = rng.standard_normal(10_001) * 10.0 ** rng.integers(-8, 8, 10_001)
    assert stable_mean(x) == stable_mean(x[::-1]) == stable_mean(rng.permutation(x))
