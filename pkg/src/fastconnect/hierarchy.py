"""Level / block / submatrix geometry of the upper-triangular connection matrix.

Level ``g`` holds ``2**(g+1) - 1`` blocks of three square submatrices of side
``2*h[g]`` with ``h[g] = s * 2**(L-g-1)``. A submatrix is addressed by
``(g, b, r)`` where ``r = p + q(q+1)/2`` flattens the in-block row/column
indices ``p <= q``. Everything near the diagonal not covered by a submatrix
(the staircase band) is handled directly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import DirectMethodRequired, DomainError

__all__ = [
    "Decomposition",
    "build_decomposition",
    "decomposition_for",
    "flat_index",
    "pq_from_flat",
    "submatrix_corner",
    "direct_region_end",
    "direct_region_widths",
    "iter_submatrices",
]

_PQ = ((0, 0), (0, 1), (1, 1))


@dataclass(frozen=True)
class Decomposition:
    input_len: int
    s: int
    L: int
    N: int
    h: tuple[int, ...]
    blocks_per_level: tuple[int, ...]
    total_blocks: int
    total_submatrices: int

    def level_offsets(self) -> np.ndarray:
        """Index of the first submatrix of each level in level-major order (length L+1)."""
        off = np.zeros(self.L + 1, dtype=np.int64)
        off[1:] = np.cumsum([3 * b for b in self.blocks_per_level])
        return off


def decomposition_for(N: int, s: int, input_len: int | None = None) -> Decomposition:
    """Decomposition for an already admissible padded length ``N = s * 2**(L+2)``."""
    if N <= 0 or s <= 0 or N % (4 * s):
        raise DomainError(f"N={N} is not of the form s*2**(L+2) for s={s}")
    ratio = N // (4 * s)
    if ratio & (ratio - 1):
        raise DomainError(f"N={N} is not of the form s*2**(L+2) for s={s}")
    L = ratio.bit_length() - 1
    h = tuple(s << (L - g - 1) for g in range(L))
    blocks = tuple((1 << (g + 1)) - 1 for g in range(L))
    nb = N // (2 * s) - L - 2
    assert nb == sum(blocks)
    return Decomposition(
        input_len=N if input_len is None else int(input_len),
        s=s,
        L=L,
        N=N,
        h=h,
        blocks_per_level=blocks,
        total_blocks=nb,
        total_submatrices=3 * nb,
    )


def build_decomposition(input_len: int, s_hat: int = 32) -> Decomposition:
    """Choose levels and padded length for a vector of ``input_len`` coefficients.

    ``L = ceil(log2(input_len / s_hat)) - 2``, then ``s = ceil(input_len / 2**(L+2))``
    and ``N = s * 2**(L+2)``.
    """
    input_len = int(input_len)
    s_hat = int(s_hat)
    if input_len <= 0 or s_hat <= 0:
        raise DomainError("input_len and s_hat must be positive")
    if s_hat < 2 or s_hat % 2:
        raise DomainError(f"s_hat must be even and >= 2, got {s_hat}")
    if input_len < 4 * s_hat:
        raise DirectMethodRequired(
            f"input of length {input_len} is too short for the hierarchy "
            f"(needs >= {4 * s_hat}); use the direct method"
        )
    # ceil(log2(n / s_hat)) without floating point
    c = 0
    while s_hat << c < input_len:
        c += 1
    L = c - 2
    s = -(-input_len // (1 << (L + 2)))
    return decomposition_for(s << (L + 2), s, input_len)


def flat_index(p: int, q: int) -> int:
    if q not in (0, 1) or p not in (0, 1) or p > q:
        raise DomainError(f"illegal submatrix indices (p, q) = ({p}, {q})")
    return p + q * (q + 1) // 2


def pq_from_flat(r: int) -> tuple[int, int]:
    if r not in (0, 1, 2):
        raise DomainError(f"illegal submatrix index r = {r}")
    return _PQ[r]


def _check_level_block(d: Decomposition, g: int, b: int) -> None:
    if not 0 <= g < d.L:
        raise DomainError(f"level {g} outside 0..{d.L - 1}")
    if not 0 <= b < d.blocks_per_level[g]:
        raise DomainError(f"block {b} outside 0..{d.blocks_per_level[g] - 1} on level {g}")


def submatrix_corner(d: Decomposition, g: int, b: int, p: int, q: int) -> tuple[int, int]:
    """Global (row, column) of the upper-left corner of submatrix ``(g, b, r(p, q))``."""
    _check_level_block(d, g, b)
    flat_index(p, q)
    h = d.h[g]
    return 2 * h * (2 * b + p), 2 * h * (2 * b + q + 2)


def iter_submatrices(d: Decomposition) -> Iterator[tuple[int, int, int]]:
    """All ``(g, b, r)`` in level-major, block-major, r-minor order."""
    for g in range(d.L):
        for b in range(d.blocks_per_level[g]):
            for r in range(3):
                yield g, b, r


def direct_region_end(d: Decomposition, i: int) -> int:
    """Exclusive column bound of the directly evaluated band in row ``i``."""
    if not 0 <= i < d.N:
        raise DomainError(f"row {i} outside 0..{d.N - 1}")
    s = d.s
    return min(d.N, 4 * s * (i // (4 * s) + 1) + 2 * s * ((i % (4 * s)) // (2 * s)))


def direct_region_widths(d: Decomposition) -> np.ndarray:
    """``direct_region_end(d, i) - i`` for every row, as an int64 array."""
    s = d.s
    i = np.arange(d.N, dtype=np.int64)
    end = 4 * s * (i // (4 * s) + 1) + 2 * s * ((i % (4 * s)) // (2 * s))
    return np.minimum(end, d.N) - i
