#!/usr/bin/env python3
"""Compiled vs pure-numpy kernels.

Times the near-diagonal band, the full O(N) transform (whose only
backend-dependent step is the band), the O(N^2) direct product and the
double-double oracle. Reports minima over repetitions and the largest
difference between the backends' outputs.

    python benchmarks/bench_backends.py [--max-log2 20] [--reps 5]
"""
import argparse
import time

import numpy as np

from fastconnect import _backend
from fastconnect.executor import ExecutionContext, execute
from fastconnect.oracle import RandomSpec, random_decaying
from fastconnect.planner import build_plan


def best_of(fn, reps):
    best, out = np.inf, None
    for _ in range(reps):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases(n, quadratic):
    f = random_decaying(RandomSpec(n, 0.0, 1))
    plan = build_plan(n, "l2c")
    lam, s = plan.lam.values, plan.decomposition.s

    def band(kind):
        def run(name):
            z = np.zeros(n)
            getattr(_backend.get(name), kind)(f, lam, s, z)
            return z
        return run

    def full(name):
        return execute(plan, f, ExecutionContext(plan, backend=name))

    def direct(name):
        out = np.empty(n)
        _backend.get(name).direct_l2c(f, lam, out)
        return out

    def oracle(name):
        k = _backend.get(name)
        out = np.empty(n)
        k.oracle_l2c(f, *k.lambda_dd(n), out)
        return out

    yield "band_l2c", band("band_l2c")
    yield "band_c2l", band("band_c2l")
    yield "execute", full
    if quadratic:
        yield "direct_l2c", direct
        yield "oracle_l2c", oracle


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--min-log2", type=int, default=12)
    ap.add_argument("--max-log2", type=int, default=20)
    ap.add_argument("--quadratic-max-log2", type=int, default=13, help="largest size for direct and oracle")
    ap.add_argument("--reps", type=int, default=5)
    args = ap.parse_args()

    names = _backend.available()
    if "compiled" not in names:
        print("compiled kernels not built; only the python backend is available")
    print(f"{'kernel':<12}{'N':>9}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>9}{'max diff':>11}")
    for e in range(args.min_log2, args.max_log2 + 1):
        n = 1 << e
        for label, run in cases(n, e <= args.quadratic_max_log2):
            times, outs = [], []
            for name in names:
                t, out = best_of(lambda: run(name), args.reps)
                times.append(t)
                outs.append(out)
            diff = max(float(np.max(np.abs(o - outs[0]))) for o in outs)
            speed = times[-1] / times[0]
            print(f"{label:<12}{n:>9}" + "".join(f"{t:>12.3e}" for t in times) + f"{speed:>8.1f}x{diff:>11.1e}")


if __name__ == "__main__":
    main()
