import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fastconnect.errors import DirectMethodRequired, DomainError
from fastconnect.hierarchy import (
    build_decomposition,
    decomposition_for,
    direct_region_end,
    direct_region_widths,
    flat_index,
    iter_submatrices,
    pq_from_flat,
    submatrix_corner,
)
from fastconnect.selftest import _cover_counts


def test_example_1000():
    d = build_decomposition(1000, 32)
    assert (d.L, d.s, d.N) == (3, 32, 1024)


def test_example_4096():
    d = build_decomposition(4096, 32)
    assert (d.L, d.s, d.N, d.total_blocks) == (5, 32, 4096, 57)


def test_eleven_blocks():
    d = build_decomposition(1024, 32)
    assert list(d.blocks_per_level) == [1, 3, 7]
    assert d.total_blocks == 11
    assert d.total_submatrices == 33
    assert list(d.h) == [128, 64, 32]


@given(st.integers(min_value=128, max_value=1 << 22), st.sampled_from([2, 4, 8, 16, 32, 64]))
def test_decomposition_invariants(n, s_hat):
    if n < 4 * s_hat:
        with pytest.raises(DirectMethodRequired):
            build_decomposition(n, s_hat)
        return
    d = build_decomposition(n, s_hat)
    assert d.N == d.s * 2 ** (d.L + 2) >= n
    assert s_hat // 2 <= d.s <= s_hat
    assert d.h[-1] == d.s if d.L else True
    assert all(d.h[g] == d.s * 2 ** (d.L - g - 1) for g in range(d.L))
    assert all(d.blocks_per_level[g] == 2 ** (g + 1) - 1 for g in range(d.L))
    assert d.total_blocks == d.N // (2 * d.s) - d.L - 2
    assert d.total_submatrices == 3 * d.total_blocks
    assert d.input_len == n


def test_smallest_admissible_is_fully_direct():
    d = build_decomposition(128, 32)
    assert (d.L, d.N, d.total_blocks) == (0, 128, 0)


@pytest.mark.parametrize("n, s_hat", [(127, 32), (1, 32), (7, 2)])
def test_too_short_needs_direct(n, s_hat):
    with pytest.raises(DirectMethodRequired, match="direct"):
        build_decomposition(n, s_hat)


@pytest.mark.parametrize("n, s_hat", [(0, 32), (-5, 32), (1024, 31), (1024, 0)])
def test_bad_arguments(n, s_hat):
    with pytest.raises(DomainError):
        build_decomposition(n, s_hat)


def test_decomposition_for_rejects_bad_length():
    with pytest.raises(DomainError):
        decomposition_for(1000, 32)


@pytest.mark.parametrize("p, q, r", [(0, 0, 0), (0, 1, 1), (1, 1, 2)])
def test_flat_index(p, q, r):
    assert flat_index(p, q) == r
    assert pq_from_flat(r) == (p, q)


@pytest.mark.parametrize("p, q", [(1, 0), (2, 1), (0, 2), (-1, 0)])
def test_flat_index_rejects(p, q):
    with pytest.raises(DomainError):
        flat_index(p, q)
    with pytest.raises(DomainError):
        pq_from_flat(3)


def test_submatrix_corner_examples():
    d = build_decomposition(1024, 32)
    assert submatrix_corner(d, 0, 0, 0, 0) == (0, 4 * d.h[0])
    assert submatrix_corner(d, 1, 1, 1, 1) == (384, 640)
    for g in range(d.L):
        assert submatrix_corner(d, g, 0, 0, 1)[1] == 6 * d.h[g]
    with pytest.raises(DomainError):
        submatrix_corner(d, 3, 0, 0, 0)
    with pytest.raises(DomainError):
        submatrix_corner(d, 0, 1, 0, 0)


@pytest.mark.parametrize("i, end", [(0, 128), (70, 192), (130, 256)])
def test_direct_region_end(i, end):
    d = build_decomposition(1024, 32)
    assert direct_region_end(d, i) == end


def test_direct_region_end_matches_enumeration():
    # complement of the submatrices in each row, the oracle the end formula must reproduce
    d = decomposition_for(2048, 32)
    covered = np.zeros((d.N, d.N), dtype=bool)
    for g, b, r in iter_submatrices(d):
        i, j = submatrix_corner(d, g, b, *pq_from_flat(r))
        covered[i : i + 2 * d.h[g], j : j + 2 * d.h[g]] = True
    for i in range(d.N):
        first = np.nonzero(covered[i, i:])[0]
        expect = i + first[0] if first.size else d.N
        assert direct_region_end(d, i) == expect


def test_widths_vectorised():
    d = decomposition_for(4096, 32)
    w = direct_region_widths(d)
    assert all(w[i] == direct_region_end(d, i) - i for i in range(d.N))
    assert w.max() <= 4 * d.s


@pytest.mark.parametrize("N", [1024, 2048, 4096])
def test_exact_cover(N):
    cnt = _cover_counts(N, 32)
    upper = np.triu(np.ones((N, N), dtype=bool))
    assert np.all(cnt[upper] == 1)
    assert np.all(cnt[~upper] == 0)


def test_iteration_order_matches_offsets():
    d = build_decomposition(4096, 32)
    items = list(iter_submatrices(d))
    assert len(items) == d.total_submatrices
    off = d.level_offsets()
    for g in range(d.L):
        assert items[off[g]] == (g, 0, 0)
    assert off[-1] == d.total_submatrices
