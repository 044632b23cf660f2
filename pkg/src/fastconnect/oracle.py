"""Independent references for testing: compensated direct transforms, error norm, inputs."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import DomainError, ResourceError
from .kernels import C2L, L2C

__all__ = ["RandomSpec", "ORACLE_MAX_N", "oracle_transform", "e_inf", "random_decaying"]

ORACLE_MAX_N = 1 << 16


def oracle_transform(direction: str, f, allow_large: bool = False, backend: str | None = None) -> np.ndarray:
    """Quadratic-cost reference carried out in double-double arithmetic.

    L2C sums every product of the connection matrix with the input; C2L solves
    the triangular system ``A x = C f`` by back substitution. Lambda values are
    generated by the double-double recurrence from sqrt(pi), independently of
    the series used by the fast path.
    """
    f = np.ascontiguousarray(f, dtype=np.float64)
    n = f.shape[0]
    if n > ORACLE_MAX_N and not allow_large:
        raise ResourceError(f"oracle of length {n} exceeds {ORACLE_MAX_N}; pass allow_large=True")
    k = _backend.get(backend)
    lh, ll = k.lambda_dd(n)
    out = np.empty(n)
    if direction == L2C:
        k.oracle_l2c(f, lh, ll, out)
    elif direction == C2L:
        k.oracle_c2l(f, lh, ll, out)
    else:
        raise DomainError(f"unknown direction {direction!r}")
    return out


def e_inf(z, z_star) -> float:
    """Relative maximum-norm error ``max|z - z*| / max|z*|``."""
    z = np.asarray(z, dtype=np.float64)
    z_star = np.asarray(z_star, dtype=np.float64)
    if z.shape != z_star.shape:
        raise DomainError(f"shape mismatch {z.shape} vs {z_star.shape}")
    ref = np.max(np.abs(z_star)) if z_star.size else 0.0
    if ref == 0.0:
        raise DomainError("reference vector is zero")
    return float(np.max(np.abs(z - z_star)) / ref)


@dataclass(frozen=True)
class RandomSpec:
    n: int
    decay: float = 0.0
    seed: int = 1


def random_decaying(spec: RandomSpec) -> np.ndarray:
    """``u_k / (k + 1)**decay`` with ``u_k`` uniform on [0, 1).

    ``u`` comes from numpy's PCG64 bit generator seeded with ``spec.seed``,
    which produces the same stream on every platform.
    """
    if spec.n < 1:
        raise DomainError(f"n must be >= 1, got {spec.n}")
    if spec.decay < 0:
        raise DomainError(f"decay must be >= 0, got {spec.decay}")
    u = np.random.Generator(np.random.PCG64(spec.seed)).random(spec.n)
    if spec.decay == 0:
        return u
    return u / np.arange(1, spec.n + 1, dtype=np.float64) ** spec.decay
