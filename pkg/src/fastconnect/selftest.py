"""Acceptance checks, shared by ``fastconnect selftest`` and the test suite.

Each check returns a :class:`CheckResult` carrying the measured quantities so
that a failure reports by how much it missed.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .cheb_tools import build_B, exact_B
from .executor import execute, execute_reference_fmm
from .gamma_ratio import count_evaluations, lambda_vector
from .hierarchy import (
    build_decomposition,
    decomposition_for,
    direct_region_end,
    iter_submatrices,
    pq_from_flat,
    submatrix_corner,
)
from .kernels import C2L, L2C
from .oracle import RandomSpec, e_inf, oracle_transform, random_decaying
from .planner import build_plan, flop_estimate, optimal_s

__all__ = ["CheckResult", "CHECKS", "run_checks"]


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.number}. {self.name}: {self.detail} ({self.seconds:.1f} s)"


def _uniform(n: int, seed: int = 1) -> np.ndarray:
    return random_decaying(RandomSpec(n, 0.0, seed))


def check_oracle_accuracy() -> tuple[bool, str]:
    """FMM vs double-double oracle on uniform input, N = 256 .. 32768, in under 30 s."""
    t0 = time.perf_counter()
    worst = {L2C: 0.0, C2L: 0.0}
    for e in range(8, 16):
        n = 1 << e
        f = _uniform(n)
        for direction in (L2C, C2L):
            z = execute(build_plan(n, direction), f)
            worst[direction] = max(worst[direction], e_inf(z, oracle_transform(direction, f)))
    elapsed = time.perf_counter() - t0
    ok = worst[L2C] <= 5e-15 and worst[C2L] <= 5e-13 and elapsed < 30.0
    return ok, f"max E_inf l2c {worst[L2C]:.2e} (<= 5e-15), c2l {worst[C2L]:.2e} (<= 5e-13), {elapsed:.1f} s (< 30 s)"


def check_roundtrip() -> tuple[bool, str]:
    """C2L(L2C(f)) returns f for N = 2^10 .. 2^20, decay 1/2 and 0, in under 60 s."""
    t0 = time.perf_counter()
    worst = {0.5: 0.0, 0.0: 0.0}
    for e in range(10, 21):
        n = 1 << e
        fwd, inv = build_plan(n, L2C), build_plan(n, C2L)
        for r in worst:
            f = random_decaying(RandomSpec(n, r, 1))
            worst[r] = max(worst[r], e_inf(execute(inv, execute(fwd, f)), f))
    elapsed = time.perf_counter() - t0
    ok = worst[0.5] <= 2e-14 and worst[0.0] <= 1e-12 and elapsed < 60.0
    return ok, f"max E_inf r=1/2 {worst[0.5]:.2e} (<= 2e-14), r=0 {worst[0.0]:.2e} (<= 1e-12), {elapsed:.1f} s (< 60 s)"


def check_flop_model() -> tuple[bool, str]:
    d = build_decomposition(1 << 20, 32)
    modal = flop_estimate(d, 18, 3.0, "modal") / d.N
    nodal = flop_estimate(d, 18, 3.0, "nodal") / d.N
    s_opt = optimal_s(18, 3.0, "modal")
    ok = 245 <= modal <= 255 and 300 <= nodal <= 320 and s_opt == 29
    return ok, f"modal {modal:.2f}N, nodal {nodal:.2f}N, optimal s {s_opt}"


def check_method_equivalence() -> tuple[bool, str]:
    n = 4096
    f = _uniform(n, seed=7)
    parts = []
    ok = True
    for direction in (L2C, C2L):
        plan = build_plan(n, direction)
        z = execute(plan, f)
        e_ref = e_inf(z, execute_reference_fmm(plan, f))
        e_orc = e_inf(z, oracle_transform(direction, f))
        ok &= e_ref <= 1e-14 and e_orc <= 1e-13
        parts.append(f"{direction} vs reference {e_ref:.2e}, vs oracle {e_orc:.2e}")
    return ok, "; ".join(parts)


_PRINTED_ROWS = {
    0: ((1,), (Fraction(-1, 2), Fraction(1, 2)), (Fraction(-1, 4), -1, Fraction(1, 4)),
        (Fraction(1, 4), Fraction(3, 8), Fraction(-3, 4), Fraction(1, 8))),
    1: ((1,), (Fraction(1, 2), Fraction(1, 2)), (Fraction(-1, 4), 1, Fraction(1, 4)),
        (Fraction(-1, 4), Fraction(3, 8), Fraction(3, 4), Fraction(1, 8))),
}


def check_exact_B(M: int = 18) -> tuple[bool, str]:
    ok = True
    B0, B1 = build_B(0, M).entries, build_B(1, M).entries
    for l, B in ((0, B0), (1, B1)):
        for k, row in enumerate(_PRINTED_ROWS[l]):
            want = np.zeros(M)
            want[: len(row)] = [float(x) for x in row]
            ok &= bool(np.array_equal(B[k], want))
    k, j = np.indices((M, M))
    ok &= bool(np.array_equal(B1, np.where((k - j) % 2 == 1, -B0, B0)))
    # every float entry equals its rational value, so no rounding took place
    exact = all(Fraction(float(B0[a, b])) == exact_B(0, M)[a][b] for a in range(M) for b in range(M))
    ok &= exact
    return ok, f"printed rows match, odd-diagonal sign flip exact, all entries exactly representable: {exact}"


def check_lambda_accuracy() -> tuple[bool, str]:
    import mpmath

    lam = lambda_vector(1 << 23).values
    worst = 0.0
    with mpmath.workdps(40):
        for i in (10**3, 10**5, 10**6, 8 * 10**6):
            ref = mpmath.gamma(i + mpmath.mpf(1) / 2) / mpmath.gamma(i + 1)
            worst = max(worst, float(abs((mpmath.mpf(lam[i]) - ref) / ref)))
    return worst < 1e-15, f"max relative error {worst:.2e} (< 1e-15)"


def _min_time(fn: Callable[[], object], reps: int) -> float:
    best = np.inf
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def check_linearity() -> tuple[bool, str]:
    times = {}
    for e, reps in ((16, 30), (20, 5)):
        n = 1 << e
        plan = build_plan(n, L2C)
        f = _uniform(n)
        times[e] = _min_time(lambda: execute(plan, f), reps)
    ratio = times[20] / times[16]
    counts = []
    for e in range(14, 21):
        with count_evaluations() as c:
            build_plan(1 << e, L2C)
        counts.append(c.count)
    growth = [b / a for a, b in zip(counts, counts[1:])]
    ok = ratio <= 24 and all(1.9 <= g <= 2.1 for g in growth)
    return ok, f"t(2^20)/t(2^16) = {ratio:.1f} (<= 24), evaluation growth per doubling {min(growth):.3f}..{max(growth):.3f}"


def check_padding() -> tuple[bool, str]:
    f = _uniform(1000, seed=3)
    padded = np.concatenate([f, np.zeros(24)])
    ok = True
    for direction in (L2C, C2L):
        plan = build_plan(1000, direction)
        a = execute(plan, f)
        b = execute(plan, padded)
        ok &= a.shape == (1000,) and bool(np.array_equal(a, b[:1000]))
    return ok, "length-1000 output bitwise equals first 1000 entries of padded transform, both directions"


def _cover_counts(N: int, s: int) -> np.ndarray:
    """How many times each upper-triangle entry is covered by a submatrix or the direct region."""
    d = decomposition_for(N, s)
    cnt = np.zeros((N, N), dtype=np.int16)
    for g, b, r in iter_submatrices(d):
        i, j = submatrix_corner(d, g, b, *pq_from_flat(r))
        h2 = 2 * d.h[g]
        cnt[i : i + h2, j : j + h2] += 1
    for i in range(N):
        cnt[i, i : direct_region_end(d, i)] += 1
    return cnt


def check_structure() -> tuple[bool, str]:
    ok = True
    for N in (1024, 2048, 4096):
        d = decomposition_for(N, 32)
        cnt = _cover_counts(N, 32)
        upper = np.triu(np.ones((N, N), dtype=bool))
        ok &= bool(np.all(cnt[upper] == 1) and np.all(cnt[~upper] == 0))
        ok &= list(d.blocks_per_level) == [2 ** (g + 1) - 1 for g in range(d.L)]
        ok &= d.total_blocks == N // 64 - d.L - 2 and d.total_submatrices == 3 * d.total_blocks
        ok &= sum(1 for _ in iter_submatrices(d)) == d.total_submatrices
    small = build_decomposition(1024, 32)
    ok &= list(small.blocks_per_level) == [1, 3, 7] and small.total_blocks == 11
    return ok, "exact cover for N = 1024, 2048, 4096; 1 + 3 + 7 = 11 blocks at N = 1024"


CHECKS: tuple[tuple[int, str, Callable[[], tuple[bool, str]]], ...] = (
    (1, "accuracy against oracle", check_oracle_accuracy),
    (2, "roundtrip", check_roundtrip),
    (3, "flop model", check_flop_model),
    (4, "method equivalence", check_method_equivalence),
    (5, "exact half-interval maps", check_exact_B),
    (6, "lambda accuracy", check_lambda_accuracy),
    (7, "asymptotic linearity", check_linearity),
    (8, "padding", check_padding),
    (9, "structure", check_structure),
)


def run_check(number: int) -> CheckResult:
    for num, name, fn in CHECKS:
        if num == number:
            t0 = time.perf_counter()
            try:
                passed, detail = fn()
            except Exception as exc:  # reported as a failure, not a crash
                passed, detail = False, f"raised {type(exc).__name__}: {exc}"
            return CheckResult(num, name, bool(passed), detail, time.perf_counter() - t0)
    raise KeyError(f"no check numbered {number}")


def run_checks(numbers=None, echo: Callable[[str], None] | None = None) -> list[CheckResult]:
    results = []
    for num, _, _ in CHECKS:
        if numbers is not None and num not in numbers:
            continue
        res = run_check(num)
        if echo is not None:
            echo(res.line())
        results.append(res)
    return results
