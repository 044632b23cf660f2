import mpmath
import numpy as np
import pytest

from fastconnect import _backend
from fastconnect.errors import DomainError, ResourceError
from fastconnect.executor import direct_transform
from fastconnect.gamma_ratio import lambda_vector
from fastconnect.kernels import C2L, L2C
from fastconnect.oracle import ORACLE_MAX_N, RandomSpec, e_inf, oracle_transform, random_decaying


def _longdouble_l2c(f):
    """Dense L2C in extended precision with its own Lambda recurrence."""
    n = f.size
    lam = np.empty(n, dtype=np.longdouble)
    lam[0] = np.longdouble("1.7724538509055160272981674833411452")
    for k in range(1, n):
        lam[k] = lam[k - 1] * (np.longdouble(k) - np.longdouble(0.5)) / np.longdouble(k)
    fl = f.astype(np.longdouble)
    out = np.zeros(n, dtype=np.longdouble)
    for i in range(n):
        j = np.arange(i, n, 2)
        out[i] = np.sum(lam[(j - i) // 2] * lam[(j + i) // 2] * fl[j])
    pi = np.longdouble("3.1415926535897932384626433832795029")
    out[0] /= pi
    out[1:] /= pi / 2
    return out


def test_l2c_unit():
    e = np.zeros(64)
    e[0] = 1.0
    assert np.max(np.abs(oracle_transform(L2C, e) - e)) == 0.0


def test_against_extended_precision():
    f = random_decaying(RandomSpec(4096, 0.5, seed=21))
    ref = _longdouble_l2c(f)
    # every entry correctly rounded, up to the extended reference's own error
    assert np.max(np.abs(oracle_transform(L2C, f) - ref) / np.abs(ref)) <= 1.2e-16


def test_against_multiprecision_small():
    f = random_decaying(RandomSpec(40, 0.0, seed=22))
    with mpmath.workdps(40):
        lam = [mpmath.gamma(k + mpmath.mpf(1) / 2) / mpmath.gamma(k + 1) for k in range(40)]
        ref = []
        for i in range(40):
            acc = sum(lam[(j - i) // 2] * lam[(j + i) // 2] * mpmath.mpf(f[j]) for j in range(i, 40, 2))
            ref.append(float(acc / (mpmath.pi if i == 0 else mpmath.pi / 2)))
    ref = np.array(ref)
    assert np.max(np.abs(oracle_transform(L2C, f) - ref) / np.abs(ref)) <= 2.0**-53


def test_c2l_back_substitution_matches_direct():
    f = random_decaying(RandomSpec(1024, 0.5, seed=23))
    assert e_inf(oracle_transform(C2L, f), direct_transform(C2L, f, lambda_vector(1024))) <= 1e-13


def test_compensated_vs_plain_direct():
    # the plain double sum drifts by a few eps; the oracle stays at rounding level
    f = random_decaying(RandomSpec(4096, 1.0, seed=24))
    assert e_inf(direct_transform(L2C, f, lambda_vector(4096)), oracle_transform(L2C, f)) <= 1e-14


@pytest.mark.parametrize("decay", [0.0, 1.0])
def test_oracle_roundtrip(decay):
    f = random_decaying(RandomSpec(4096, decay, seed=25))
    assert e_inf(oracle_transform(C2L, oracle_transform(L2C, f)), f) <= 1e-14


def test_size_guard():
    with pytest.raises(ResourceError):
        oracle_transform(L2C, np.zeros(ORACLE_MAX_N + 1))
    with pytest.raises(DomainError):
        oracle_transform("sideways", np.zeros(4))


@pytest.mark.skipif(len(_backend.available()) < 2, reason="compiled kernels not built")
@pytest.mark.parametrize("direction", [L2C, C2L])
def test_backends_agree(direction):
    f = random_decaying(RandomSpec(512, 0.5, seed=26))
    a = oracle_transform(direction, f, backend="compiled")
    b = oracle_transform(direction, f, backend="python")
    assert e_inf(a, b) <= 1e-16


def test_e_inf():
    assert e_inf([1.0, 2.0], [1.0, 2.0]) == 0.0
    assert e_inf([1.0, 3.0], [1.0, 2.0]) == 0.5
    assert e_inf([0.0, -4.0], [2.0, -4.0]) == 0.5
    with pytest.raises(DomainError):
        e_inf([1.0], [1.0, 2.0])
    with pytest.raises(DomainError):
        e_inf([1.0], [0.0])


def test_random_decaying():
    u = random_decaying(RandomSpec(1000, 0.0, seed=1))
    assert np.all((u >= 0) & (u < 1))
    assert np.array_equal(u, random_decaying(RandomSpec(1000, 0.0, seed=1)))
    assert not np.array_equal(u, random_decaying(RandomSpec(1000, 0.0, seed=2)))
    v = random_decaying(RandomSpec(1000, 0.5, seed=1))
    assert np.allclose(v, u / np.sqrt(np.arange(1, 1001)), rtol=1e-15, atol=0)
    for bad in (RandomSpec(0), RandomSpec(4, -1.0)):
        with pytest.raises(DomainError):
            random_decaying(bad)
