"""Double-double arithmetic on floats or numpy arrays.

A value is an unevaluated pair ``hi + lo`` with ``|lo| <= ulp(hi) / 2``.
Products use Veltkamp splitting since numpy has no fused multiply-add.
"""
import numpy as np

PI_HI = 3.141592653589793
PI_LO = 1.2246467991473532e-16
SQRT_PI_HI = 1.772453850905516
SQRT_PI_LO = -7.666586499825799e-17
_SPLITTER = 134217729.0  # 2**27 + 1


def split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = split(a)
    bh, bl = split(b)
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def dd_mul(ah, al, bh, bl):
    p, e = two_prod(ah, bh)
    return quick_two_sum(p, e + (ah * bl + al * bh))


def dd_add(ah, al, bh, bl):
    s, e = two_sum(ah, bh)
    return quick_two_sum(s, e + (al + bl))


def dd_div(ah, al, bh, bl):
    q1 = ah / bh
    ph, pl = dd_mul(q1, 0.0 * q1, bh, bl)
    rh, rl = dd_add(ah, al, -ph, -pl)
    return quick_two_sum(q1, rh / bh)


def dd_sqrt(a):
    """Square root of a double, returned as a double-double."""
    s = np.sqrt(a)
    p, e = two_prod(s, s)
    return quick_two_sum(s, ((a - p) - e) / (2.0 * s))
