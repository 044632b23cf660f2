"""Chebyshev machinery: small fixed-size 2D DCT-II, Vandermonde matrices and
the exact half-interval basis maps B(0), B(1)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from .errors import DomainError

__all__ = [
    "TriangularMap",
    "VandermondeSet",
    "gauss_nodes",
    "dct_matrix",
    "dct2_2d",
    "chebyshev_vander",
    "vandermonde",
    "monomial_to_chebyshev",
    "chebyshev_to_monomial",
    "half_interval_binomial",
    "exact_B",
    "build_B",
]

MAX_EXACT_M = 56  # largest M whose B entries all round-trip through float exactly


@lru_cache(maxsize=None)
def gauss_nodes(M: int) -> np.ndarray:
    """Chebyshev-Gauss nodes ``cos((m + 1/2) pi / M)``, mirrored so ``x[M-1-m] == -x[m]`` bitwise."""
    x = np.cos((np.arange(M) + 0.5) * np.pi / M)
    half = M // 2
    x[M - half :] = -x[:half][::-1]
    if M % 2:
        x[half] = 0.0
    x.flags.writeable = False
    return x


@lru_cache(maxsize=None)
def dct_matrix(M: int) -> np.ndarray:
    """``D[k, m] = 2 / (c_k M) cos(k (m + 1/2) pi / M)`` so that ``a_hat = D a D^T``."""
    k = np.arange(M)[:, None]
    m = np.arange(M)[None, :]
    D = 2.0 / M * np.cos(k * (m + 0.5) * np.pi / M)
    D[0] *= 0.5
    D.flags.writeable = False
    return D


def dct2_2d(a: np.ndarray) -> np.ndarray:
    """2D Chebyshev coefficients of samples on the tensor Gauss grid.

    Accepts a single ``(M, M)`` matrix or a stack ``(..., M, M)``; the trailing
    two axes are transformed.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise DomainError(f"dct2_2d needs square trailing axes, got shape {a.shape}")
    D = dct_matrix(a.shape[-1])
    return D @ a @ D.T


def chebyshev_vander(x: np.ndarray, M: int) -> np.ndarray:
    """``V[m, k] = T_k(x[m])`` by the three-term recurrence."""
    x = np.asarray(x, dtype=np.float64)
    V = np.empty((x.size, M))
    V[:, 0] = 1.0
    if M > 1:
        V[:, 1] = x
    for k in range(2, M):
        V[:, k] = 2.0 * x * V[:, k - 1] - V[:, k - 2]
    return V


@dataclass(frozen=True)
class VandermondeSet:
    sigma: int
    h: int
    entries: np.ndarray


def vandermonde(sigma: int, h: int, M: int) -> VandermondeSet:
    """``entries[m, k] = T_k(-1 + (2m + sigma) / h)`` for ``m < h``, ``k < M``."""
    if sigma not in (0, 1):
        raise DomainError(f"parity must be 0 or 1, got {sigma}")
    if h < 1 or M < 1:
        raise DomainError(f"need h >= 1 and M >= 1, got h={h}, M={M}")
    x = -1.0 + (2.0 * np.arange(h) + sigma) / h
    V = chebyshev_vander(x, M)
    V.flags.writeable = False
    return VandermondeSet(sigma, h, V)


# -- exact basis maps -------------------------------------------------------


def monomial_to_chebyshev(M: int) -> list[list[Fraction]]:
    """W with ``x^n = sum_j W[n][j] T_j(x)``."""
    W = [[Fraction(0)] * M for _ in range(M)]
    for n in range(M):
        for j in range(n % 2, n + 1, 2):
            cj = 2 if j == 0 else 1
            W[n][j] = Fraction(2 * comb(n, (n - j) // 2), cj * 2**n)
    return W


def chebyshev_to_monomial(M: int) -> list[list[Fraction]]:
    """W^{-1} with ``T_n(x) = sum_j Winv[n][j] x^j``."""
    Wi = [[Fraction(0)] * M for _ in range(M)]
    Wi[0][0] = Fraction(1)
    for n in range(1, M):
        for j in range(n % 2, n + 1, 2):
            sign = -1 if ((n - j) // 2) % 2 else 1
            Wi[n][j] = Fraction(sign * n * 2**j * comb((n + j) // 2, (n - j) // 2), n + j)
    return Wi


def half_interval_binomial(l: int, M: int) -> list[list[Fraction]]:
    """V(l) with ``((x + 2l - 1) / 2)^n = sum_j V[n][j] x^j``."""
    t = 2 * l - 1
    return [
        [Fraction(comb(n, n - j) * t ** (n - j), 2**n) if j <= n else Fraction(0) for j in range(M)]
        for n in range(M)
    ]


def _matmul(A, B):
    M = len(A)
    return [[sum((A[i][k] * B[k][j] for k in range(M)), Fraction(0)) for j in range(M)] for i in range(M)]


@lru_cache(maxsize=None)
def exact_B(l: int, M: int) -> tuple[tuple[Fraction, ...], ...]:
    """Rational entries of B(l) = W^{-1} V(l) W."""
    if l not in (0, 1):
        raise DomainError(f"half-interval selector must be 0 or 1, got {l}")
    if M < 1:
        raise DomainError(f"M must be >= 1, got {M}")
    if M > MAX_EXACT_M:
        raise OverflowError(f"M={M} exceeds {MAX_EXACT_M}; entries are no longer exact in double precision")
    B = _matmul(_matmul(chebyshev_to_monomial(M), half_interval_binomial(l, M)), monomial_to_chebyshev(M))
    return tuple(tuple(row) for row in B)


@dataclass(frozen=True)
class TriangularMap:
    """Lower-triangular map ``T_k((Y + 2l - 1)/2) = sum_j entries[k, j] T_j(Y)``."""

    l: int
    entries: np.ndarray


def build_B(l: int, M: int) -> TriangularMap:
    B = np.array([[float(v) for v in row] for row in exact_B(l, M)])
    B.flags.writeable = False
    return TriangularMap(l, B)
