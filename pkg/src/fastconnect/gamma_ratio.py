"""Gamma quotient ``Lambda(z) = Gamma(z + 1/2) / Gamma(z + 1)``.

Large arguments use the even asymptotic series of
``tau(z) = sqrt(z) Gamma(z + 1/4) / Gamma(z + 3/4)`` through
``Lambda(z) = tau(z + 1/4) / sqrt(z + 1/4)``. Small arguments are shifted
upward into the series range and brought back with the exact recurrence
``Lambda(z) = Lambda(z + 1) (z + 1) / (z + 1/2)``.
"""
from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import _dd as dd
from .errors import DomainError

__all__ = [
    "SQRT_PI",
    "SERIES_THRESHOLD",
    "TAU_COEFFICIENTS",
    "LambdaVector",
    "EvaluationCounter",
    "count_evaluations",
    "terms_needed",
    "lambda_scalar",
    "lambda_array",
    "lambda_vector",
]

SQRT_PI = dd.SQRT_PI_HI  # correctly rounded; math.sqrt(math.pi) is one ulp low

# 1, -1/2^6, 21/2^13, -671/2^19, 180323/2^27; only the last one is rounded
TAU_COEFFICIENTS = (1.0, -1.0 / 64.0, 21.0 / 8192.0, -671.0 / 524288.0, 180323.0 / 134217728.0)

SERIES_THRESHOLD = 19.88
# (lower bound on z, terms) from most to least terms
_TERM_THRESHOLDS = ((1844.0, 2), (134.0, 3), (40.0, 4))
_ANCHOR_STRIDE = 8
_FIRST_ANCHOR = 64  # 5-term truncation error is below 1e-20 from here on


class EvaluationCounter:
    """Tally of Lambda evaluations performed through this module."""

    def __init__(self) -> None:
        self.count = 0

    def add(self, n: int) -> None:
        self.count += int(n)


_counters: list[EvaluationCounter] = []


def _tally(n: int) -> None:
    for c in _counters:
        c.add(n)


@contextmanager
def count_evaluations() -> Iterator[EvaluationCounter]:
    """Count every Lambda evaluation made inside the ``with`` block.

    >>> with count_evaluations() as cnt:
    ...     _ = lambda_scalar(100.0)
    >>> cnt.count
    1
    """
    counter = EvaluationCounter()
    _counters.append(counter)
    try:
        yield counter
    finally:
        _counters.remove(counter)


def terms_needed(z_min: float) -> int:
    """Smallest number of tau-series terms accurate to machine precision for all z >= z_min.

    Arguments at or below ``SERIES_THRESHOLD`` still use the full 5-term series,
    after the caller has shifted them upward.
    """
    if not z_min > 0:
        raise DomainError(f"z_min must be positive, got {z_min!r}")
    for bound, terms in _TERM_THRESHOLDS:
        if z_min > bound:
            return terms
    return 5


def _series(z, terms: int):
    """Lambda(z) from the tau expansion; valid for z > SERIES_THRESHOLD.

    Written as ``r + r * tail`` with ``r = 1/sqrt(z + 1/4)`` so the truncation
    only touches a correction far below one ulp, and the 2..5-term forms differ
    by at most the final rounding.
    """
    zz = z + 0.25
    u = 1.0 / (zz * zz)
    t = TAU_COEFFICIENTS[terms - 1]
    for c in TAU_COEFFICIENTS[terms - 2 : 0 : -1]:
        t = t * u + c
    r = 1.0 / np.sqrt(zz)
    return r + r * (t * u)


def _series_dd(z: np.ndarray):
    """5-term series in double-double for ``z >= _FIRST_ANCHOR``, where truncation is below 1e-20."""
    zz = z + 0.25
    u = dd.dd_div(1.0, 0.0, *dd.two_prod(zz, zz))
    th, tl = TAU_COEFFICIENTS[4], 0.0
    for c in TAU_COEFFICIENTS[3::-1]:
        th, tl = dd.dd_mul(th, tl, *u)
        th, tl = dd.dd_add(th, tl, c, 0.0)
    return dd.dd_div(th, tl, *dd.dd_sqrt(zz))


def _recur_dd(vh, vl, i):
    """One step ``Lambda(i) = Lambda(i - 1) (i - 1/2) / i`` in double-double."""
    vh, vl = dd.dd_mul(vh, vl, i - 0.5, 0.0)
    return dd.dd_div(vh, vl, i, 0.0)


def _head_table() -> np.ndarray:
    out = np.empty(_FIRST_ANCHOR)
    vh, vl = dd.SQRT_PI_HI, dd.SQRT_PI_LO
    out[0] = vh
    for i in range(1, _FIRST_ANCHOR):
        vh, vl = _recur_dd(vh, vl, float(i))
        out[i] = vh
    out.flags.writeable = False
    return out


def lambda_scalar(z: float) -> float:
    """Evaluate Lambda(z) for a single non-negative argument."""
    z = float(z)
    if not z >= 0:
        raise DomainError(f"Lambda is evaluated for z >= 0 only, got {z!r}")
    _tally(1)
    if z > SERIES_THRESHOLD:
        return float(_series(z, 5))
    if z == int(z):
        return float(_HEAD[int(z)])
    shift = int(math.floor(SERIES_THRESHOLD - z)) + 1
    v = float(_series(z + shift, 5))
    for k in range(shift, 0, -1):
        x = z + (k - 1)
        v = v * (x + 1.0) / (x + 0.5)
    return v


def lambda_array(z, terms: int = 5) -> np.ndarray:
    """Vectorised Lambda(z).

    ``terms`` is used where ``z > SERIES_THRESHOLD``; the caller is responsible
    for choosing it with :func:`terms_needed`. Smaller arguments go through the
    shifted 5-term path.
    """
    z = np.asarray(z, dtype=np.float64)
    if z.size and not np.all(z >= 0):
        raise DomainError("Lambda is evaluated for z >= 0 only")
    if not 2 <= terms <= 5:
        raise DomainError(f"terms must be in 2..5, got {terms}")
    _tally(z.size)
    small = z <= SERIES_THRESHOLD
    if not small.any():
        return _series(z, terms)
    out = np.empty_like(z)
    big = ~small
    out[big] = _series(z[big], terms)
    zs = z[small]
    shift = np.floor(SERIES_THRESHOLD - zs).astype(np.int64) + 1
    v = _series(zs + shift, 5)
    for k in range(int(shift.max()), 0, -1):
        active = shift >= k
        x = zs[active] + (k - 1)
        v[active] = v[active] * (x + 1.0) / (x + 0.5)
    out[small] = v
    return out


@dataclass(frozen=True)
class LambdaVector:
    """``values[k] = Lambda(k)`` for ``k < len(values)``; read-only."""

    values: np.ndarray

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, item):
        return self.values[item]


def lambda_vector(n: int) -> LambdaVector:
    """Lambda at the integers ``0..n-1``.

    Every eighth value from ``_FIRST_ANCHOR`` on is anchored with the series;
    the seven in between follow the recurrence
    ``Lambda(i) = Lambda(i - 1) (i - 1/2) / i``. Anchors and recurrence are
    carried in double-double and rounded once, so every entry is within about
    half an ulp and consecutive entries satisfy the recurrence to within
    rounding. Values below the first anchor come from a table built by the
    same recurrence seeded at sqrt(pi).
    """
    n = int(n)
    if n < 1:
        raise DomainError(f"lambda_vector needs n >= 1, got {n}")
    out = np.empty(n)
    head = min(n, _FIRST_ANCHOR)
    out[:head] = _HEAD[:head]
    if n > _FIRST_ANCHOR:
        idx = np.arange(_FIRST_ANCHOR, n, _ANCHOR_STRIDE, dtype=np.float64)
        _tally(idx.size)
        vh, vl = _series_dd(idx)
        out[_FIRST_ANCHOR::_ANCHOR_STRIDE] = vh
        for j in range(1, _ANCHOR_STRIDE):
            dest = out[_FIRST_ANCHOR + j :: _ANCHOR_STRIDE]
            if dest.size == 0:
                break
            vh, vl, idx = vh[: dest.size], vl[: dest.size], idx[: dest.size] + 1.0
            vh, vl = _recur_dd(vh, vl, idx)
            dest[:] = vh
    out.flags.writeable = False
    return LambdaVector(out)


_HEAD = _head_table()
