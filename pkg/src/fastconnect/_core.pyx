# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: direct (band and full) transforms and the double-double oracles.

Every function here has a numpy twin in ``_fallback`` with the same signature.
"""
from cython.parallel cimport prange
from libc.math cimport fma

import numpy as np

cdef double PI_HI = 3.141592653589793
cdef double PI_LO = 1.2246467991473532e-16
cdef double SQRT_PI_HI = 1.772453850905516
cdef double SQRT_PI_LO = -7.666586499825799e-17


# -- error-free transformations ---------------------------------------------

cdef inline void _two_sum(double a, double b, double* s, double* e) noexcept nogil:
    cdef double x = a + b
    cdef double bb = x - a
    s[0] = x
    e[0] = (a - (x - bb)) + (b - bb)


cdef inline void _quick_two_sum(double a, double b, double* s, double* e) noexcept nogil:
    cdef double x = a + b
    s[0] = x
    e[0] = b - (x - a)


cdef inline void _dd_mul(double ah, double al, double bh, double bl,
                         double* ch, double* cl) noexcept nogil:
    cdef double p = ah * bh
    cdef double e = fma(ah, bh, -p)
    e = e + (ah * bl + al * bh)
    _quick_two_sum(p, e, ch, cl)


cdef inline void _dd_add(double ah, double al, double bh, double bl,
                         double* ch, double* cl) noexcept nogil:
    cdef double s, e
    _two_sum(ah, bh, &s, &e)
    e = e + (al + bl)
    _quick_two_sum(s, e, ch, cl)


cdef inline void _dd_div(double ah, double al, double bh, double bl,
                         double* ch, double* cl) noexcept nogil:
    cdef double q1 = ah / bh
    cdef double ph, pl, rh, rl
    _dd_mul(q1, 0.0, bh, bl, &ph, &pl)
    _dd_add(ah, al, -ph, -pl, &rh, &rl)
    cdef double q2 = rh / bh
    _quick_two_sum(q1, q2, ch, cl)


# -- plain double kernels ---------------------------------------------------

cdef inline double _c2l_entry(Py_ssize_t i, Py_ssize_t k, const double* lam) noexcept nogil:
    cdef double di = <double>i
    cdef double dk = <double>k
    if k == 0:
        return 0.5 * lam[0] / lam[i]
    return ((di + 0.5) * (di + 2.0 * dk)
            / ((di + dk) * (2.0 * di + 2.0 * dk + 1.0) * (1.0 - 2.0 * dk))
            * lam[k] / lam[i + k])


def direct_l2c(const double[::1] f, const double[::1] lam, double[::1] out):
    """out[i] = sum_k lam[k] lam[i+k] f[i+2k] (no diagonal scaling)."""
    cdef Py_ssize_t n = f.shape[0]
    cdef Py_ssize_t i, k
    cdef double acc
    with nogil:
        for i in range(n):
            acc = 0.0
            for k in range((n - 1 - i) // 2 + 1):
                acc = acc + lam[k] * lam[i + k] * f[i + 2 * k]
            out[i] = acc


def direct_c2l(const double[::1] f, const double[::1] lam, double[::1] out):
    """out[i] = sum_k Lc(i, i+2k) f[i+2k]; ``f`` already scaled by c_k."""
    cdef Py_ssize_t n = f.shape[0]
    cdef Py_ssize_t i, k
    cdef double acc
    cdef const double* lp = &lam[0]
    with nogil:
        for i in range(n):
            acc = 0.0
            for k in range((n - 1 - i) // 2 + 1):
                acc = acc + _c2l_entry(i, k, lp) * f[i + 2 * k]
            out[i] = acc


cdef inline Py_ssize_t _band_end(Py_ssize_t i, Py_ssize_t s, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t e = 4 * s * (i // (4 * s) + 1) + 2 * s * ((i % (4 * s)) // (2 * s))
    return e if e < n else n


def band_l2c(const double[::1] f, const double[::1] lam, Py_ssize_t s,
             double[::1] z, int threads=1):
    """z[i] += sum over the staircase band of row i (L2C entries)."""
    cdef Py_ssize_t n = f.shape[0]
    cdef Py_ssize_t i, j, end
    cdef double acc
    for i in prange(n, nogil=True, schedule="static", num_threads=threads):
        end = _band_end(i, s, n)
        acc = 0.0
        j = i
        while j < end:
            acc = acc + lam[(j - i) // 2] * lam[(j + i) // 2] * f[j]
            j = j + 2
        z[i] = z[i] + acc


def band_c2l(const double[::1] f, const double[::1] lam, Py_ssize_t s,
             double[::1] z, int threads=1):
    """z[i] += sum over the staircase band of row i (C2L entries, ``f`` pre-scaled)."""
    cdef Py_ssize_t n = f.shape[0]
    cdef Py_ssize_t i, j, end
    cdef double acc
    cdef const double* lp = &lam[0]
    for i in prange(n, nogil=True, schedule="static", num_threads=threads):
        end = _band_end(i, s, n)
        acc = 0.0
        j = i
        while j < end:
            acc = acc + _c2l_entry(i, (j - i) // 2, lp) * f[j]
            j = j + 2
        z[i] = z[i] + acc


# -- double-double oracles --------------------------------------------------

def lambda_dd(Py_ssize_t n):
    """Lambda(0..n-1) as unevaluated sums hi + lo, by recurrence in double-double."""
    hi = np.empty(n)
    lo = np.empty(n)
    cdef double[::1] h = hi
    cdef double[::1] l = lo
    cdef double vh = SQRT_PI_HI, vl = SQRT_PI_LO
    cdef Py_ssize_t i
    if n == 0:
        return hi, lo
    h[0] = vh
    l[0] = vl
    with nogil:
        for i in range(1, n):
            _dd_mul(vh, vl, 2.0 * i - 1.0, 0.0, &vh, &vl)
            _dd_div(vh, vl, 2.0 * i, 0.0, &vh, &vl)
            h[i] = vh
            l[i] = vl
    return hi, lo


def oracle_l2c(const double[::1] f, const double[::1] lh, const double[::1] ll,
               double[::1] out):
    """C^{-1} A f with every entry, product and sum carried in double-double."""
    cdef Py_ssize_t n = f.shape[0]
    cdef Py_ssize_t i, k, m
    cdef double ah, al, th, tl, sh, sl, ch, cl
    with nogil:
        for i in range(n):
            sh = 0.0
            sl = 0.0
            for k in range((n - 1 - i) // 2 + 1):
                m = i + k
                _dd_mul(lh[k], ll[k], lh[m], ll[m], &ah, &al)
                _dd_mul(ah, al, f[i + 2 * k], 0.0, &th, &tl)
                _dd_add(sh, sl, th, tl, &sh, &sl)
            if i == 0:
                _dd_div(sh, sl, PI_HI, PI_LO, &ch, &cl)
            else:
                _dd_div(sh, sl, 0.5 * PI_HI, 0.5 * PI_LO, &ch, &cl)
            out[i] = ch + cl


def oracle_c2l(const double[::1] f, const double[::1] lh, const double[::1] ll,
               double[::1] out):
    """Solve A x = C f by back substitution in double-double."""
    cdef Py_ssize_t n = f.shape[0]
    xh_arr = np.zeros(n)
    xl_arr = np.zeros(n)
    cdef double[::1] xh = xh_arr
    cdef double[::1] xl = xl_arr
    cdef Py_ssize_t i, k, m
    cdef double ah, al, th, tl, sh, sl, dh, dl
    with nogil:
        for i in range(n - 1, -1, -1):
            if i == 0:
                _dd_mul(PI_HI, PI_LO, f[i], 0.0, &sh, &sl)
            else:
                _dd_mul(0.5 * PI_HI, 0.5 * PI_LO, f[i], 0.0, &sh, &sl)
            for k in range(1, (n - 1 - i) // 2 + 1):
                m = i + k
                _dd_mul(lh[k], ll[k], lh[m], ll[m], &ah, &al)
                _dd_mul(ah, al, xh[i + 2 * k], xl[i + 2 * k], &th, &tl)
                _dd_add(sh, sl, -th, -tl, &sh, &sl)
            _dd_mul(lh[0], ll[0], lh[i], ll[i], &dh, &dl)
            _dd_div(sh, sl, dh, dl, &th, &tl)
            xh[i] = th
            xl[i] = tl
            out[i] = th + tl
