"""Continuous connection kernels and their samples on submatrix Gauss grids.

The L2C kernel ``A(x, y) = Lambda((y-x)/2) Lambda((y+x)/2)`` factors into a
"minus" part depending only on ``y - x`` and a "plus" part depending only on
``y + x``. On a Gauss grid the minus factor is persymmetric and equal for every
submatrix of a level sharing the same corner offset ``j - i``; the plus factor
is symmetric. Only one triangle of each is evaluated. The C2L kernel reuses
the same two factors, so it costs no extra Lambda evaluations.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cheb_tools import gauss_nodes
from .errors import DomainError
from .gamma_ratio import lambda_array, lambda_scalar, terms_needed
from .hierarchy import Decomposition, pq_from_flat, submatrix_corner

__all__ = [
    "L2C",
    "C2L",
    "kernel_A",
    "kernel_L",
    "SubmatrixSample",
    "MinusCache",
    "level_min_argument",
    "sample_submatrix",
    "sample_level",
]

L2C = "l2c"
C2L = "c2l"


def kernel_A(x: float, y: float) -> float:
    """Legendre-to-Chebyshev kernel; equals ``a_ij`` at integer ``(i, j)`` with ``j - i`` even."""
    if y < x:
        raise DomainError(f"kernel is defined for y >= x only, got ({x}, {y})")
    return lambda_scalar((y - x) / 2.0) * lambda_scalar((y + x) / 2.0)


def kernel_L(x: float, y: float) -> float:
    """Chebyshev-to-Legendre kernel.

    At ``(0, 0)`` the closed form is 0/0; the value 1/2 is its limit along the
    diagonal. The caller multiplies the first input coefficient by 2.
    """
    if y < x:
        raise DomainError(f"kernel is defined for y >= x only, got ({x}, {y})")
    if x == y:
        # prefactor reduces to 1/2 on the diagonal, including the limit at 0
        return 0.5 * lambda_scalar(0.0) / lambda_scalar(x)
    pre = 2.0 * (x + 0.5) * y / ((x + y) * (x + y + 1.0) * (x - y + 1.0))
    return pre * lambda_scalar((y - x) / 2.0) / lambda_scalar((x + y) / 2.0)


@dataclass(frozen=True)
class SubmatrixSample:
    level: int
    block: int
    r: int
    grid: np.ndarray
    minus: np.ndarray
    plus: np.ndarray


def level_min_argument(d: Decomposition, g: int, M: int) -> float:
    """Smallest Lambda argument sampled anywhere on level ``g``."""
    x0 = gauss_nodes(M)[0]
    return d.h[g] * (2.0 - x0)


def _anti_upper(M: int):
    """Index pairs with ``m + n <= M - 1`` (one half of a persymmetric matrix)."""
    m, n = np.nonzero(np.add.outer(np.arange(M), np.arange(M)) <= M - 1)
    return m, n


def _persymmetric_fill(vals: np.ndarray, M: int) -> np.ndarray:
    m, n = _anti_upper(M)
    out = np.empty(vals.shape[:-1] + (M, M))
    out[..., m, n] = vals
    out[..., M - 1 - n, M - 1 - m] = vals
    return out


def _symmetric_fill(vals: np.ndarray, M: int) -> np.ndarray:
    m, n = np.triu_indices(M)
    out = np.empty(vals.shape[:-1] + (M, M))
    out[..., m, n] = vals
    out[..., n, m] = vals
    return out


@dataclass
class MinusCache:
    """Persymmetric minus factors per ``(level, offset)``, built once while planning.

    ``offset`` is ``j - i`` measured in units of ``h``: 4 for r in {0, 2}, 6 for r = 1.
    """

    d: Decomposition
    M: int
    store: dict = field(default_factory=dict)

    def get(self, g: int, offset: int) -> np.ndarray:
        key = (g, offset)
        if key not in self.store:
            M = self.M
            X = gauss_nodes(M)
            h = self.d.h[g]
            m, n = _anti_upper(M)
            z = (offset * h + h * (X[n] - X[m])) / 2.0
            terms = terms_needed(level_min_argument(self.d, g, M))
            A = _persymmetric_fill(lambda_array(z, terms), M)
            A.flags.writeable = False
            self.store[key] = A
        return self.store[key]


def _plus_factor(d: Decomposition, g: int, corner_sums: np.ndarray, M: int) -> np.ndarray:
    """Symmetric plus factors for corners with ``i + j`` given in ``corner_sums``."""
    X = gauss_nodes(M)
    h = d.h[g]
    m, n = np.triu_indices(M)
    z = (corner_sums[:, None] + 2.0 * h + h * (X[m] + X[n])[None, :]) / 2.0
    terms = terms_needed(level_min_argument(d, g, M))
    return _symmetric_fill(lambda_array(z, terms), M)


def _c2l_prefactor(x: np.ndarray, y: np.ndarray, diff: np.ndarray) -> np.ndarray:
    # diff = y - x is passed in: forming it from x and y would cancel badly for
    # small blocks far from the origin
    return 2.0 * (x + 0.5) * y / ((x + y) * (x + y + 1.0) * (1.0 - diff))


def _local_diff(d: Decomposition, g: int, offsets: np.ndarray, M: int) -> np.ndarray:
    """``y - x`` on the grid, from corner offsets ``j - i`` and local node differences."""
    X = gauss_nodes(M)
    return offsets[..., None, None] + d.h[g] * (X[None, :] - X[:, None])


def _physical(d: Decomposition, g: int, corners: np.ndarray, M: int) -> np.ndarray:
    X = gauss_nodes(M)
    return corners[:, None] + d.h[g] * (X[None, :] + 1.0)


def _combine(direction: str, minus, plus, x=None, y=None, diff=None):
    if direction == L2C:
        return minus * plus
    if direction == C2L:
        return _c2l_prefactor(x[..., :, None], y[..., None, :], diff) * minus / plus
    raise DomainError(f"unknown direction {direction!r}")


def sample_submatrix(
    d: Decomposition, cache: MinusCache, g: int, b: int, r: int, direction: str = L2C
) -> SubmatrixSample:
    """Kernel values on the tensor Gauss grid of submatrix ``(g, b, r)``."""
    p, q = pq_from_flat(r)
    i, j = submatrix_corner(d, g, b, p, q)
    M = cache.M
    minus = cache.get(g, 6 if r == 1 else 4)
    plus = _plus_factor(d, g, np.array([i + j], dtype=np.float64), M)[0]
    x = _physical(d, g, np.array([float(i)]), M)[0]
    y = _physical(d, g, np.array([float(j)]), M)[0]
    diff = _local_diff(d, g, np.float64(j - i), M)
    return SubmatrixSample(g, b, r, _combine(direction, minus, plus, x, y, diff), minus, plus)


def sample_level(d: Decomposition, cache: MinusCache, g: int, direction: str = L2C) -> np.ndarray:
    """Kernel samples for every submatrix of level ``g``, shape ``(b_g, 3, M, M)``.

    Identical, value for value, to calling :func:`sample_submatrix` per submatrix.
    """
    M = cache.M
    nb = d.blocks_per_level[g]
    h = d.h[g]
    b = np.arange(nb, dtype=np.float64)
    p = np.array([0.0, 0.0, 1.0])
    q = np.array([0.0, 1.0, 1.0])
    i = 2 * h * (2 * b[:, None] + p[None, :])
    j = 2 * h * (2 * b[:, None] + q[None, :] + 2)
    plus = _plus_factor(d, g, (i + j).ravel(), M).reshape(nb, 3, M, M)
    minus = np.stack([cache.get(g, 4), cache.get(g, 6), cache.get(g, 4)])
    if direction == L2C:
        return minus[None] * plus
    x = _physical(d, g, i.ravel(), M).reshape(nb, 3, M)
    y = _physical(d, g, j.ravel(), M).reshape(nb, 3, M)
    diff = _local_diff(d, g, j - i, M)
    return _combine(direction, minus[None], plus, x, y, diff)
