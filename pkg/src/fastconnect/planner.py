"""Planning: everything an execution needs, precomputed once in O(N)."""
from __future__ import annotations

import struct
from dataclasses import dataclass, field
from typing import BinaryIO

import numpy as np

from .cheb_tools import build_B, dct2_2d, vandermonde
from .errors import DomainError, FormatError
from .gamma_ratio import LambdaVector, count_evaluations, lambda_vector
from .hierarchy import Decomposition, build_decomposition, decomposition_for
from .kernels import C2L, L2C, MinusCache, sample_level

__all__ = [
    "Plan",
    "build_plan",
    "flop_estimate",
    "optimal_s",
    "reference_flop_estimate",
    "direct_flop_estimate",
    "memory_footprint",
    "save_plan",
    "load_plan",
    "PLAN_MAGIC",
]

PLAN_MAGIC = b"FLCPLAN1"
_DIRECTIONS = (L2C, C2L)


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Plan:
    """Immutable transform state shared by any number of executions.

    ``A_hat`` is one ``(N_c, M, M)`` arena in level-major, block-major,
    r-minor order; ``level_offsets[g]`` is the first submatrix of level ``g``.
    ``B`` is ``(2, M, M)``, ``T_finest`` is ``(2, s, M)`` indexed by parity.
    """

    direction: str
    decomposition: Decomposition
    lam: LambdaVector
    A_hat: np.ndarray
    B: np.ndarray
    T_finest: np.ndarray
    M: int
    level_offsets: np.ndarray = field(repr=False)
    lambda_evaluations: int = 0

    @property
    def N(self) -> int:
        return self.decomposition.N

    def level_coefficients(self, g: int) -> np.ndarray:
        """Coefficient matrices of level ``g`` as a ``(b_g, 3, M, M)`` view."""
        lo, hi = self.level_offsets[g], self.level_offsets[g + 1]
        return self.A_hat[lo:hi].reshape(self.decomposition.blocks_per_level[g], 3, self.M, self.M)


def _assemble(direction, d, lam, A_hat, M, evals=0, B=None, T=None) -> Plan:
    if B is None:
        B = np.stack([build_B(0, M).entries, build_B(1, M).entries])
    if T is None:
        T = np.stack([vandermonde(sigma, d.s, M).entries for sigma in (0, 1)])
    return Plan(
        direction=direction,
        decomposition=d,
        lam=lam,
        A_hat=_readonly(A_hat),
        B=_readonly(B),
        T_finest=_readonly(T),
        M=M,
        level_offsets=d.level_offsets(),
        lambda_evaluations=evals,
    )


def build_plan(input_len: int, direction: str = L2C, s_hat: int = 32, M: int = 18) -> Plan:
    """Plan a transform of vectors up to ``input_len`` coefficients.

    Cost is linear in the padded length: one batch of kernel samples and one
    small 2D DCT per submatrix, plus the Lambda vector.
    """
    if direction not in _DIRECTIONS:
        raise DomainError(f"direction must be one of {_DIRECTIONS}, got {direction!r}")
    if M < 4:
        raise DomainError(f"M must be >= 4, got {M}")
    d = build_decomposition(input_len, s_hat)
    with count_evaluations() as counter:
        lam = lambda_vector(d.N)
        cache = MinusCache(d, M)
        A_hat = np.empty((d.total_submatrices, M, M))
        off = d.level_offsets()
        for g in range(d.L):
            samples = sample_level(d, cache, g, direction)
            A_hat[off[g] : off[g + 1]] = dct2_2d(samples).reshape(-1, M, M)
    return _assemble(direction, d, lam, A_hat, M, counter.count)


# -- cost models ------------------------------------------------------------


def flop_estimate(d: Decomposition, M: int = 18, mu: float = 3.0, variant: str = "modal") -> float:
    """Leading-order execution flops, counting only the innermost multiply-adds.

    modal: ``(mu s + 4M + 8M^2/s) N``; nodal: ``(mu s + 4M + 14M^2/s) N``.
    """
    s = d.s
    if variant == "modal":
        transport = 8.0
    elif variant == "nodal":
        transport = 14.0
    else:
        raise DomainError(f"variant must be 'modal' or 'nodal', got {variant!r}")
    return (mu * s + 4.0 * M + transport * M * M / s) * d.N


def reference_flop_estimate(d: Decomposition, M: int = 18, mu: float = 3.0) -> float:
    """Flops of the per-level method: ``mu s N + sum_g b_g (16 h_g M + 12 M^2)``."""
    return mu * d.s * d.N + sum(b * (16.0 * h * M + 12.0 * M * M) for b, h in zip(d.blocks_per_level, d.h))


def direct_flop_estimate(n: int, mu: float = 3.0) -> float:
    """``mu`` flops per nonzero of the n x n connection matrix (every other diagonal vanishes)."""
    return mu * ((n + 1) // 2) * (n // 2 + 1)


def optimal_s(M: int = 18, mu: float = 3.0, variant: str = "modal", s_max: int = 1024) -> int:
    """Integer s minimising the per-coefficient flop estimate."""
    transport = 8.0 if variant == "modal" else 14.0
    s = np.arange(1, s_max + 1, dtype=np.float64)
    return int(s[np.argmin(mu * s + 4.0 * M + transport * M * M / s)])


def memory_footprint(plan: Plan) -> int:
    """Doubles held by the plan plus one execution's scratch (padded vector and work arrays)."""
    d = plan.decomposition
    held = plan.A_hat.size + plan.lam.values.size + plan.B.size + plan.T_finest.size
    work = 2 * 2 * plan.M * sum(d.blocks_per_level)  # w and c for one parity pass
    return int(held + d.N + work)


# -- serialization ----------------------------------------------------------

_HEADER = struct.Struct("<5I")


def save_plan(plan: Plan, fh: BinaryIO) -> None:
    """Write a plan as ``FLCPLAN1`` + little-endian u32 N, s, L, M, direction, then the arrays."""
    d = plan.decomposition
    fh.write(PLAN_MAGIC)
    fh.write(_HEADER.pack(d.N, d.s, d.L, plan.M, _DIRECTIONS.index(plan.direction)))
    for arr in (plan.lam.values, plan.A_hat, plan.B, plan.T_finest):
        fh.write(np.ascontiguousarray(arr, dtype="<f8").tobytes())


def _read_exact(fh: BinaryIO, n: int) -> bytes:
    buf = fh.read(n)
    if len(buf) != n:
        raise FormatError("plan file is truncated")
    return buf


def load_plan(fh: BinaryIO) -> Plan:
    if fh.read(len(PLAN_MAGIC)) != PLAN_MAGIC:
        raise FormatError("not a plan file (bad magic)")
    N, s, L, M, dcode = _HEADER.unpack(_read_exact(fh, _HEADER.size))
    if dcode >= len(_DIRECTIONS):
        raise FormatError(f"unknown direction code {dcode}")
    if M < 4:
        raise FormatError(f"plan file declares M = {M}, need M >= 4")
    try:
        d = decomposition_for(N, s)
    except DomainError as exc:
        raise FormatError(str(exc)) from exc
    if d.L != L:
        raise FormatError(f"header level count {L} inconsistent with N={N}, s={s}")

    def take(count):
        return np.frombuffer(_read_exact(fh, 8 * count), dtype="<f8").astype(np.float64)

    lam = take(N)
    lam.flags.writeable = False
    A_hat = take(d.total_submatrices * M * M).reshape(-1, M, M)
    B = take(2 * M * M).reshape(2, M, M)
    T = take(2 * s * M).reshape(2, s, M)
    return _assemble(_DIRECTIONS[dcode], d, LambdaVector(lam), A_hat, M, B=B, T=T)
