"""Pure numpy versions of the compiled kernels in ``_core``.

Loops run diagonal-by-diagonal so each step is one vectorised operation over
all rows. Double-double arithmetic comes from ``_dd``.
"""
from __future__ import annotations

import numpy as np

from ._dd import PI_HI as _PI_HI
from ._dd import PI_LO as _PI_LO
from ._dd import SQRT_PI_HI as _SQRT_PI_HI
from ._dd import SQRT_PI_LO as _SQRT_PI_LO
from ._dd import dd_div as _dd_div
from ._dd import dd_mul as _dd_mul
from ._dd import quick_two_sum as _quick_two_sum
from ._dd import split as _split


def _c2l_entries(di, k, lam0, lam_k, lam_ik):
    """C2L band entries for rows ``di`` (as floats) on diagonal ``2k``; ``lam_ik`` is ``lam[i + k]``."""
    if k == 0:
        return 0.5 * lam0 / lam_ik
    dk = float(k)
    return ((di + 0.5) * (di + 2.0 * dk)
            / ((di + dk) * (2.0 * di + 2.0 * dk + 1.0) * (1.0 - 2.0 * dk))
            * lam_k / lam_ik)


def direct_l2c(f, lam, out):
    n = f.shape[0]
    out[:] = 0.0
    for k in range((n + 1) // 2):
        m = n - 2 * k
        out[:m] += lam[k] * lam[k : k + m] * f[2 * k :]


def direct_c2l(f, lam, out):
    n = f.shape[0]
    out[:] = 0.0
    for k in range((n + 1) // 2):
        m = n - 2 * k
        out[:m] += _c2l_entries(np.arange(m, dtype=np.float64), k, lam[0], lam[k], lam[k : k + m]) * f[2 * k :]


def _band_sum(f, lam, s, z, entries):
    """Add the staircase band to ``z``, summing each row in the compiled kernel's order.

    Rows are viewed as blocks of ``4s``: in the first half of a block row ``r``
    reaches column ``4s`` of the block, in the second half column ``6s``.
    Diagonal ``2k`` therefore covers the row ranges ``[0, min(2s, 4s - 2k))``
    and ``[2s, min(4s, 6s - 2k))`` of every block, which are plain 2D slices.
    Columns past ``n`` read zeros.
    """
    n = f.shape[0]
    w = 4 * s
    nb = -(-n // w)
    rows = nb * w
    fe = np.zeros(rows + 6 * s)
    fe[:n] = f
    le = np.ones(rows + 3 * s)
    m = min(lam.shape[0], le.shape[0])
    le[:m] = lam[:m]
    di = np.arange(rows, dtype=np.float64).reshape(nb, w)
    acc = np.zeros((nb, w))
    for k in range(3 * s):
        f2 = fe[2 * k : 2 * k + rows].reshape(nb, w)
        l2 = le[k : k + rows].reshape(nb, w)
        for lo, hi in ((0, min(2 * s, w - 2 * k)), (2 * s, min(w, 6 * s - 2 * k))):
            if hi > lo:
                acc[:, lo:hi] += entries(di[:, lo:hi], k, le[0], le[k], l2[:, lo:hi]) * f2[:, lo:hi]
    z += acc.reshape(-1)[:n]


def _l2c_entries(di, k, lam0, lam_k, lam_ik):
    return lam_k * lam_ik


def band_l2c(f, lam, s, z, threads=1):
    _band_sum(f, lam, s, z, _l2c_entries)


def band_c2l(f, lam, s, z, threads=1):
    _band_sum(f, lam, s, z, _c2l_entries)


# -- double-double ----------------------------------------------------------


def lambda_dd(n):
    hi = np.empty(n)
    lo = np.empty(n)
    if n == 0:
        return hi, lo
    vh, vl = _SQRT_PI_HI, _SQRT_PI_LO
    hi[0], lo[0] = vh, vl
    for i in range(1, n):
        vh, vl = _dd_mul(vh, vl, 2.0 * i - 1.0, 0.0)
        vh, vl = _dd_div(vh, vl, 2.0 * i, 0.0)
        hi[i], lo[i] = vh, vl
    return hi, lo


def _prod_dd(ah, al, ahs, bh, bl, bhs):
    """Double-double product with the hi words already split; returns an unnormalised pair."""
    p = ah * bh
    e = ((ahs[0] * bhs[0] - p) + ahs[0] * bhs[1] + ahs[1] * bhs[0]) + ahs[1] * bhs[1]
    return p, e + (ah * bl + al * bh)


def _accumulate(sh, sl, th, tl):
    """``(sh, sl) += (th, tl)`` in place, folding rounding errors into ``sl`` lazily."""
    s = sh + th
    bb = s - sh
    sl += ((sh - (s - bb)) + (th - bb)) + tl
    sh[...] = s


def oracle_l2c(f, lh, ll, out):
    n = f.shape[0]
    lam_split = _split(lh)
    f_split = _split(f)
    sh = np.zeros(n)
    sl = np.zeros(n)
    for k in range((n + 1) // 2):
        m = n - 2 * k
        a = (lh[k], ll[k], _split(lh[k]))
        ph, pl = _prod_dd(*a, lh[k : k + m], ll[k : k + m], (lam_split[0][k : k + m], lam_split[1][k : k + m]))
        ph, pl = _quick_two_sum(ph, pl)
        th, tl = _prod_dd(ph, pl, _split(ph), f[2 * k :], 0.0, (f_split[0][2 * k :], f_split[1][2 * k :]))
        _accumulate(sh[:m], sl[:m], th, tl)
    sh, sl = _quick_two_sum(sh, sl)
    ch = np.full(n, 0.5 * _PI_HI)
    cl = np.full(n, 0.5 * _PI_LO)
    ch[0], cl[0] = _PI_HI, _PI_LO
    qh, ql = _dd_div(sh, sl, ch, cl)
    out[:] = qh + ql


def oracle_c2l(f, lh, ll, out):
    """Column-oriented back substitution: once ``x_i`` is known, its column is
    subtracted from every row above it in one vector step."""
    n = f.shape[0]
    lam_split = _split(lh)
    ch = np.full(n, 0.5 * _PI_HI)
    cl = np.full(n, 0.5 * _PI_LO)
    ch[0], cl[0] = _PI_HI, _PI_LO
    sh, sl = _dd_mul(ch, cl, f, 0.0 * f)
    for i in range(n - 1, -1, -1):
        dh, dl = _dd_mul(lh[0], ll[0], lh[i], ll[i])
        xh, xl = _dd_div(*_quick_two_sum(sh[i], sl[i]), dh, dl)
        out[i] = xh + xl
        K = i // 2
        if K == 0:
            continue
        # rows i - 2k, k = 1..K, get a_{i-2k, i} x_i with a = Lambda_k Lambda_{i-k}
        b = slice(i - 1, i - K - 1 if i - K - 1 >= 0 else None, -1)
        ph, pl = _prod_dd(
            lh[1 : K + 1], ll[1 : K + 1], (lam_split[0][1 : K + 1], lam_split[1][1 : K + 1]),
            lh[b], ll[b], (lam_split[0][b], lam_split[1][b]),
        )
        ph, pl = _quick_two_sum(ph, pl)
        th, tl = _prod_dd(ph, pl, _split(ph), -xh, -xl, _split(-xh))
        rows = slice(i - 2, i - 2 * K - 1 if i - 2 * K - 1 >= 0 else None, -2)
        _accumulate(sh[rows], sl[rows], th, tl)
