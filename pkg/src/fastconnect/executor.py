"""Transform execution.

Three routes to the same operator:

* :func:`execute` -- the O(N) method. Per parity it enters coefficient space
  once at the finest level, pushes the moments ``w`` down to coarser levels
  with the half-interval maps, applies every coefficient matrix, pushes the
  results ``c`` back up to the finest level and leaves coefficient space.
  The near-diagonal band is summed directly.
* :func:`execute_reference_fmm` -- the O(N log N) variant that enters and
  leaves coefficient space separately on every level.
* :func:`direct_transform` -- the O(N^2) diagonal-wise product.
"""
from __future__ import annotations

import os

import numpy as np

from . import _backend
from .cheb_tools import vandermonde
from .errors import DirectionError, DomainError, SizeError
from .kernels import C2L, L2C
from .planner import Plan

__all__ = [
    "WorkSet",
    "ExecutionContext",
    "combine_children",
    "scatter_parents",
    "execute",
    "execute_reference_fmm",
    "direct_transform",
    "resolve_threads",
]

_HALF_PI = 0.5 * np.pi


def resolve_threads(threads: int | None) -> int:
    """Explicit value, else ``FASTCONNECT_THREADS``, else 1."""
    if threads is None:
        threads = int(os.environ.get("FASTCONNECT_THREADS", "1") or 1)
    if threads < 1:
        raise DomainError(f"threads must be >= 1, got {threads}")
    return threads


# -- half-interval transport --------------------------------------------------


def _diagonals(B0: np.ndarray) -> list[np.ndarray]:
    return [np.diagonal(B0, -n) for n in range(B0.shape[0])]


def _combine_batch(parents: np.ndarray, children: np.ndarray, diags: list[np.ndarray]) -> None:
    """``parents[k] += B(0) children[k, 0] + B(1) children[k, 1]`` for a stack of k.

    B(1) equals B(0) with its odd diagonals negated, so one triangular sweep
    over child sums (even diagonals) and child differences (odd diagonals)
    replaces the two products.
    """
    M = parents.shape[-1]
    z = (children[:, 0] + children[:, 1], children[:, 0] - children[:, 1])
    for n in range(M):
        parents[:, n:] += diags[n] * z[n & 1][:, : M - n]


def _scatter_batch(parents: np.ndarray, children: np.ndarray, diags: list[np.ndarray]) -> None:
    """``children[k, p] += B(p)^T parents[k]`` for p in {0, 1}, one sweep."""
    M = parents.shape[-1]
    even = np.zeros_like(parents)
    odd = np.zeros_like(parents)
    for n in range(M):
        acc = odd if n & 1 else even
        acc[:, : M - n] += diags[n] * parents[:, n:]
    children[:, 0] += even + odd
    children[:, 1] += even - odd


def _check_B0(B0, M):
    if B0.shape != (M, M):
        raise DomainError(f"B0 must be {M}x{M}, got {B0.shape}")


def combine_children(w_parent: np.ndarray, w_children: np.ndarray, B0) -> np.ndarray:
    """Add ``B(0) w_children[0] + B(1) w_children[1]`` to ``w_parent`` in place.

    ``B0`` is a :class:`~fastconnect.cheb_tools.TriangularMap` or its entries.
    """
    B0 = getattr(B0, "entries", B0)
    M = w_parent.shape[-1]
    if w_parent.shape != (M,) or w_children.shape != (2, M):
        raise DomainError(f"shape mismatch: parent {w_parent.shape}, children {w_children.shape}")
    _check_B0(B0, M)
    _combine_batch(w_parent[None], w_children[None], _diagonals(B0))
    return w_parent


def scatter_parents(c_parent: np.ndarray, c_children: np.ndarray, B0) -> np.ndarray:
    """Add ``B(p)^T c_parent`` to ``c_children[p]`` in place for p = 0, 1."""
    B0 = getattr(B0, "entries", B0)
    M = c_parent.shape[-1]
    if c_parent.shape != (M,) or c_children.shape != (2, M):
        raise DomainError(f"shape mismatch: parent {c_parent.shape}, children {c_children.shape}")
    _check_B0(B0, M)
    _scatter_batch(c_parent[None], c_children[None], _diagonals(B0))
    return c_children


# -- work buffers ---------------------------------------------------------------


class WorkSet:
    """Moment (``w``) and local-expansion (``c``) buffers, one ``(b_g, 2, M)`` pair per level."""

    def __init__(self, blocks_per_level, M: int):
        self.w = [np.zeros((nb, 2, M)) for nb in blocks_per_level]
        self.c = [np.zeros((nb, 2, M)) for nb in blocks_per_level]

    def zero(self) -> None:
        for a in self.w:
            a.fill(0.0)
        for a in self.c:
            a.fill(0.0)


class ExecutionContext:
    """Scratch owned by one caller; a :class:`Plan` may serve many contexts at once.

    ``combine_count`` and ``scatter_count`` tally block-level transport
    operations of the most recent execution (both parities).
    """

    def __init__(self, plan: Plan, threads: int | None = None, backend: str | None = None):
        self.plan = plan
        self.threads = resolve_threads(threads)
        self.kernels = _backend.get(backend)
        self.work = WorkSet(plan.decomposition.blocks_per_level, plan.M)
        self.combine_count = 0
        self.scatter_count = 0


def _prepare(plan: Plan, f) -> tuple[np.ndarray, int]:
    f = np.asarray(f, dtype=np.float64)
    if f.ndim != 1:
        raise SizeError(f"expected a 1-D coefficient vector, got shape {f.shape}")
    n = f.shape[0]
    if n > plan.N:
        raise SizeError(f"vector length {n} exceeds plan length {plan.N}")
    g = np.zeros(plan.N)
    g[:n] = f
    if plan.direction == C2L and n:
        g[0] *= 2.0
    return g, n


def _check_direction(plan: Plan, direction: str | None) -> None:
    if direction is not None and direction != plan.direction:
        raise DirectionError(f"plan is for {plan.direction}, requested {direction}")


def _finish(plan: Plan, ctx: ExecutionContext, g: np.ndarray, z: np.ndarray, n: int) -> np.ndarray:
    s = plan.decomposition.s
    lam = plan.lam.values
    if plan.direction == L2C:
        ctx.kernels.band_l2c(g, lam, s, z, ctx.threads)
        z[0] /= np.pi
        z[1:] /= _HALF_PI
    else:
        ctx.kernels.band_c2l(g, lam, s, z, ctx.threads)
    return z[:n]


def execute(plan: Plan, f, context: ExecutionContext | None = None, direction: str | None = None) -> np.ndarray:
    """Transform ``f`` with the O(N) multipole method.

    Inputs shorter than the plan are zero padded and the result truncated back
    to ``len(f)``; ``f`` itself is not modified.
    """
    _check_direction(plan, direction)
    ctx = context if context is not None else ExecutionContext(plan)
    if ctx.plan is not plan:
        raise DomainError("execution context belongs to a different plan")
    g, n = _prepare(plan, f)
    z = np.zeros(plan.N)
    d = plan.decomposition
    L, s, N, M = d.L, d.s, d.N, plan.M
    ws = ctx.work
    diags = _diagonals(plan.B[0])
    ctx.combine_count = ctx.scatter_count = 0
    for sigma in (0, 1):
        if L == 0:
            break
        ws.zero()
        T = plan.T_finest[sigma]
        nb_fine = d.blocks_per_level[L - 1]
        # (1) moments on the finest level
        f_fine = g[4 * s :].reshape(nb_fine, 2, 2 * s)[..., sigma::2]
        np.matmul(f_fine, T, out=ws.w[L - 1])
        # (2) children -> parents, finest to coarsest; block 0 has no parent slot
        for lev in range(L - 1, 0, -1):
            nb = d.blocks_per_level[lev]
            parents = ws.w[lev - 1].reshape(-1, M)
            _combine_batch(parents, ws.w[lev][1:], diags)
            ctx.combine_count += nb - 1
        # (3) apply coefficient matrices: r=0 (p=0,q=0), r=1 (p=0,q=1), r=2 (p=1,q=1)
        for lev in range(L):
            A = plan.level_coefficients(lev)
            w = ws.w[lev]
            c = ws.c[lev]
            c[:, 0] += np.einsum("bkl,bl->bk", A[:, 0], w[:, 0])
            c[:, 0] += np.einsum("bkl,bl->bk", A[:, 1], w[:, 1])
            c[:, 1] += np.einsum("bkl,bl->bk", A[:, 2], w[:, 1])
        # (4) parents -> children, coarsest to finest; the last child block has no parent
        for lev in range(L - 1):
            nb_child = d.blocks_per_level[lev + 1]
            _scatter_batch(ws.c[lev].reshape(-1, M), ws.c[lev + 1][: nb_child - 1], diags)
            ctx.scatter_count += nb_child - 1
        # (5) back to coefficients on the finest level
        z_fine = z[: N - 4 * s].reshape(nb_fine, 2, 2 * s)
        z_fine[..., sigma::2] += ws.c[L - 1] @ T.T
    # (6) near-diagonal band, (7) diagonal scaling
    return _finish(plan, ctx, g, z, n)


def execute_reference_fmm(plan: Plan, f, direction: str | None = None, backend: str | None = None) -> np.ndarray:
    """Same operator as :func:`execute`, entering coefficient space on every level."""
    _check_direction(plan, direction)
    ctx = ExecutionContext(plan, backend=backend)
    g, n = _prepare(plan, f)
    z = np.zeros(plan.N)
    d = plan.decomposition
    for sigma in (0, 1):
        for lev in range(d.L):
            h = d.h[lev]
            nb = d.blocks_per_level[lev]
            T = vandermonde(sigma, h, plan.M).entries
            A = plan.level_coefficients(lev)
            w = g[4 * h :].reshape(nb, 2, 2 * h)[..., sigma::2] @ T
            c = np.empty_like(w)
            c[:, 0] = np.einsum("bkl,bl->bk", A[:, 0], w[:, 0]) + np.einsum("bkl,bl->bk", A[:, 1], w[:, 1])
            c[:, 1] = np.einsum("bkl,bl->bk", A[:, 2], w[:, 1])
            z[: d.N - 4 * h].reshape(nb, 2, 2 * h)[..., sigma::2] += c @ T.T
    return _finish(plan, ctx, g, z, n)


def direct_transform(direction: str, f, lam, backend: str | None = None) -> np.ndarray:
    """O(N^2) transform applied diagonal by diagonal, entries formed on the fly from ``lam``."""
    lam = np.ascontiguousarray(getattr(lam, "values", lam), dtype=np.float64)
    f = np.ascontiguousarray(f, dtype=np.float64)
    n = f.shape[0]
    if n < 1:
        raise DomainError("empty input")
    if lam.shape[0] < n:
        raise DomainError(f"lambda vector of length {lam.shape[0]} is shorter than input {n}")
    kernels = _backend.get(backend)
    out = np.empty(n)
    if direction == L2C:
        kernels.direct_l2c(f, lam, out)
        out[0] /= np.pi
        out[1:] /= _HALF_PI
    elif direction == C2L:
        g = f.copy()
        g[0] *= 2.0
        kernels.direct_c2l(g, lam, out)
    else:
        raise DomainError(f"unknown direction {direction!r}")
    return out
