from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fastconnect.cheb_tools import (
    MAX_EXACT_M,
    build_B,
    chebyshev_to_monomial,
    chebyshev_vander,
    dct2_2d,
    exact_B,
    gauss_nodes,
    monomial_to_chebyshev,
    vandermonde,
)
from fastconnect.errors import DomainError

M = 18


def test_gauss_nodes_mirrored():
    for m in (4, 5, 17, 18):
        x = gauss_nodes(m)
        assert np.array_equal(x[::-1], -x)
        with mpmath.workdps(30):
            exact = [float(mpmath.cos((k + mpmath.mpf(1) / 2) * mpmath.pi / m)) for k in range(m)]
        assert np.max(np.abs(x - exact)) <= np.finfo(float).eps  # cos of a rounded argument
        assert np.all(np.diff(x) < 0)


def test_dct_of_ones():
    a_hat = dct2_2d(np.ones((M, M)))
    expect = np.zeros((M, M))
    expect[0, 0] = 1.0
    assert np.max(np.abs(a_hat - expect)) <= 4e-15


def test_dct_of_T1_in_x():
    x = gauss_nodes(M)
    a = np.repeat(x[:, None], M, axis=1)  # a[m, n] = X_m
    a_hat = dct2_2d(a)
    expect = np.zeros((M, M))
    expect[1, 0] = 1.0
    assert np.max(np.abs(a_hat - expect)) <= 4e-15


def _evaluate(a_hat, x, y):
    """sum_kl a_hat[k, l] T_k(x) T_l(y), the expansion the DCT inverts."""
    return chebyshev_vander(x, a_hat.shape[0]) @ a_hat @ chebyshev_vander(y, a_hat.shape[1]).T


@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_dct_reconstructs_random(seed):
    a = np.random.default_rng(seed).standard_normal((M, M))
    x = gauss_nodes(M)
    back = _evaluate(dct2_2d(a), x, x)
    assert np.max(np.abs(back - a)) / np.max(np.abs(a)) <= 1e-14


def test_dct_batched_matches_single():
    a = np.random.default_rng(0).standard_normal((3, 2, M, M))
    batch = dct2_2d(a)
    for idx in np.ndindex(3, 2):
        assert np.array_equal(batch[idx], dct2_2d(a[idx]))


def test_dct_rejects_non_square():
    with pytest.raises(DomainError):
        dct2_2d(np.ones((3, 4)))


def test_B_printed_rows():
    B0, B1 = build_B(0, M).entries, build_B(1, M).entries
    assert list(B0[1, :3]) == [-0.5, 0.5, 0.0]
    assert list(B1[3, :5]) == [-0.25, 0.375, 0.75, 0.125, 0.0]
    assert list(B0[2, :3]) == [-0.25, -1.0, 0.25]


def test_B_lower_triangular_and_sign_flip():
    B0, B1 = build_B(0, M).entries, build_B(1, M).entries
    k, j = np.indices((M, M))
    assert np.all(B0[j > k] == 0) and np.all(B1[j > k] == 0)
    assert np.array_equal(B1, np.where((k - j) % 2, -B0, B0))


@pytest.mark.parametrize("m", [4, 18, 32, MAX_EXACT_M])
def test_B_exact_in_double(m):
    for l in (0, 1):
        assert all(Fraction(float(v)) == v for row in exact_B(l, m) for v in row)


def test_B_limit():
    with pytest.raises(OverflowError):
        exact_B(0, MAX_EXACT_M + 1)
    with pytest.raises(DomainError):
        exact_B(2, 4)


def test_B_half_interval_identity():
    # sum_j B(0)[7, j] T_j(0.3) = T_7((0.3 - 1) / 2)
    B0 = build_B(0, M).entries
    lhs = B0[7] @ chebyshev_vander(np.array([0.3]), M)[0]
    rhs = np.cos(7 * np.arccos(-0.35))
    assert abs(lhs - rhs) <= 1e-15


@given(st.floats(min_value=-1, max_value=1), st.integers(min_value=0, max_value=1))
def test_B_identity_random_point(y, l):
    B = build_B(l, M).entries
    lhs = B @ chebyshev_vander(np.array([y]), M)[0]
    rhs = chebyshev_vander(np.array([(y + 2 * l - 1) / 2]), M)[0]
    assert np.max(np.abs(lhs - rhs)) <= 1e-13


def test_basis_maps_inverse():
    W, Wi = monomial_to_chebyshev(12), chebyshev_to_monomial(12)
    prod = [[sum(Wi[i][k] * W[k][j] for k in range(12)) for j in range(12)] for i in range(12)]
    assert prod == [[Fraction(int(i == j)) for j in range(12)] for i in range(12)]


def test_vandermonde_examples():
    V = vandermonde(0, 32, M).entries
    assert np.array_equal(V[0], (-1.0) ** np.arange(M))
    for sigma in (0, 1):
        assert np.all(vandermonde(sigma, 32, M).entries[:, 0] == 1.0)
    x = -1.0 + (2 * 31 + 1) / 32
    assert x == 0.96875
    assert np.allclose(vandermonde(1, 32, M).entries[31], np.cos(np.arange(M) * np.arccos(x)), atol=1e-14)


def test_vandermonde_rejects():
    with pytest.raises(DomainError):
        vandermonde(2, 32, M)
    with pytest.raises(DomainError):
        vandermonde(0, 0, M)
