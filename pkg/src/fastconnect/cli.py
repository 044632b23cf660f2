"""Command-line front end.

Subcommands: ``transform``, ``gen``, ``bench``, ``plan``, ``selftest``.
Exit codes: 0 success, 1 usage, 2 data or format error, 3 self-test failure.
"""
from __future__ import annotations

import argparse
import csv
import sys
import time

import numpy as np

from .errors import DirectMethodRequired, DirectionError, DomainError, FormatError, ResourceError, SizeError
from .executor import ExecutionContext, direct_transform, execute, execute_reference_fmm, resolve_threads
from .gamma_ratio import lambda_vector
from .hierarchy import build_decomposition
from .kernels import C2L, L2C
from .oracle import ORACLE_MAX_N, RandomSpec, e_inf, oracle_transform, random_decaying
from .planner import (
    build_plan,
    direct_flop_estimate,
    flop_estimate,
    load_plan,
    reference_flop_estimate,
    save_plan,
)
from .vectorfile import read_text, read_vector, write_text, write_vector

__all__ = ["run_cli", "main", "auto_reps"]

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_SELFTEST = 0, 1, 2, 3
METHODS = ("fmm", "reference", "direct")
_PLAN_REPS_MAX = 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def auto_reps(n: int) -> int:
    """``max(3, min(2^(26 - log2 n), 10^4))``."""
    log2n = max(int(n).bit_length() - 1, 0)
    return max(3, min(2 ** max(26 - log2n, 0), 10_000))


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _build_parser() -> _Parser:
    p = _Parser(prog="fastconnect", description="Fast Legendre <-> Chebyshev coefficient transforms.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    t = sub.add_parser("transform", help="transform a coefficient vector file")
    t.add_argument("--dir", required=True, choices=(L2C, C2L))
    t.add_argument("--in", dest="inp", required=True, metavar="FILE")
    t.add_argument("--out", required=True, metavar="FILE")
    t.add_argument("--method", choices=METHODS, default="fmm")
    t.add_argument("--s-hat", type=_positive_int, default=32)
    t.add_argument("--M", type=_positive_int, default=18)
    t.add_argument("--text", action="store_true", help="read and write one float per line")
    t.add_argument("--threads", type=_positive_int, default=None)
    t.add_argument("--plan", metavar="FILE", help="use a saved plan instead of planning")

    g = sub.add_parser("gen", help="write a random decaying vector")
    g.add_argument("--n", required=True, type=_positive_int)
    g.add_argument("--decay", type=float, default=0.0)
    g.add_argument("--seed", type=int, default=1)
    g.add_argument("--out", required=True, metavar="FILE")
    g.add_argument("--text", action="store_true")

    b = sub.add_parser("bench", help="time planning and execution, CSV to stdout")
    b.add_argument("--min-log2", type=_positive_int, default=8)
    b.add_argument("--max-log2", type=_positive_int, default=16)
    b.add_argument("--reps", default="auto", help="'auto' or a repetition count")
    b.add_argument("--dir", choices=(L2C, C2L), default=L2C)
    b.add_argument("--methods", default="fmm", help="comma separated subset of fmm,reference,direct")
    b.add_argument("--s-hat", type=_positive_int, default=32)
    b.add_argument("--M", type=_positive_int, default=18)
    b.add_argument("--threads", type=_positive_int, default=None)
    b.add_argument("--seed", type=int, default=1)
    b.add_argument("--out", metavar="FILE", help="write CSV here instead of stdout")

    pl = sub.add_parser("plan", help="build and save a plan")
    pl.add_argument("--dir", required=True, choices=(L2C, C2L))
    pl.add_argument("--n", required=True, type=_positive_int)
    pl.add_argument("--s-hat", type=_positive_int, default=32)
    pl.add_argument("--M", type=_positive_int, default=18)
    pl.add_argument("--out", required=True, metavar="FILE")

    st = sub.add_parser("selftest", help="run the acceptance checks")
    st.add_argument("--only", default=None, help="comma separated check numbers")
    return p


# -- subcommands --------------------------------------------------------------


def _read_input(path: str, text: bool) -> np.ndarray:
    return read_text(path) if text else read_vector(path)


def _cmd_transform(a) -> int:
    f = _read_input(a.inp, a.text)
    if f.size == 0:
        raise FormatError(f"{a.inp}: empty vector")
    if a.method == "direct":
        z = direct_transform(a.dir, f, lambda_vector(f.size))
    else:
        if a.plan:
            with open(a.plan, "rb") as fh:
                plan = load_plan(fh)
            if plan.direction != a.dir:
                raise DirectionError(f"plan file is for {plan.direction}, requested {a.dir}")
        else:
            try:
                plan = build_plan(f.size, a.dir, a.s_hat, a.M)
            except DirectMethodRequired as exc:
                print(f"fastconnect: falling back to the direct method ({exc})", file=sys.stderr)
                plan = None
        if plan is None:
            z = direct_transform(a.dir, f, lambda_vector(f.size))
        elif a.method == "reference":
            z = execute_reference_fmm(plan, f)
        else:
            z = execute(plan, f, ExecutionContext(plan, a.threads))
    (write_text if a.text else write_vector)(a.out, z)
    return EXIT_OK


def _cmd_gen(a) -> int:
    if a.decay < 0:
        raise UsageError(f"--decay must be >= 0, got {a.decay}")
    f = random_decaying(RandomSpec(a.n, a.decay, a.seed))
    (write_text if a.text else write_vector)(a.out, f)
    return EXIT_OK


def _min_seconds(fn, reps: int) -> tuple[float, object]:
    best, out = np.inf, None
    for _ in range(reps):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _bench_options(a) -> tuple[list[str], int | None]:
    methods = [m.strip() for m in a.methods.split(",") if m.strip()]
    bad = [m for m in methods if m not in METHODS]
    if bad or not methods:
        raise UsageError(f"--methods must be a subset of {','.join(METHODS)}, got {a.methods!r}")
    fixed = None
    if a.reps != "auto":
        try:
            fixed = int(a.reps)
        except ValueError:
            raise UsageError(f"--reps must be 'auto' or an integer, got {a.reps!r}") from None
        if fixed < 1:
            raise UsageError(f"--reps must be >= 1, got {fixed}")
    if a.min_log2 > a.max_log2:
        raise UsageError("--min-log2 exceeds --max-log2")
    return methods, fixed


def _bench_rows(a, methods, fixed, threads):
    for e in range(a.min_log2, a.max_log2 + 1):
        n = 1 << e
        reps = auto_reps(n) if fixed is None else fixed
        plan_reps = min(reps, _PLAN_REPS_MAX)
        f = random_decaying(RandomSpec(n, 0.0, a.seed))
        ref = oracle_transform(a.dir, f) if n <= ORACLE_MAX_N else None
        for m in methods:
            if m == "direct":
                t_plan, lam = _min_seconds(lambda: lambda_vector(n), plan_reps)
                t_exec, z = _min_seconds(lambda: direct_transform(a.dir, f, lam), reps)
                flops = direct_flop_estimate(n)
            else:
                try:
                    build_decomposition(n, a.s_hat)
                except DirectMethodRequired:
                    continue
                t_plan, plan = _min_seconds(lambda: build_plan(n, a.dir, a.s_hat, a.M), plan_reps)
                d = plan.decomposition
                if m == "fmm":
                    ctx = ExecutionContext(plan, threads)
                    t_exec, z = _min_seconds(lambda: execute(plan, f, ctx), reps)
                    flops = flop_estimate(d, a.M)
                else:
                    t_exec, z = _min_seconds(lambda: execute_reference_fmm(plan, f), reps)
                    flops = reference_flop_estimate(d, a.M)
            err = "" if ref is None else f"{e_inf(z, ref):.3e}"
            yield [n, m, f"{t_plan:.6e}", f"{t_exec:.6e}", f"{flops:.6e}", err]


def _cmd_bench(a) -> int:
    header = ["N", "method", "plan_seconds", "exec_seconds", "flop_estimate", "einf_vs_oracle"]
    methods, fixed = _bench_options(a)
    threads = resolve_threads(a.threads)
    out = open(a.out, "w", newline="") if a.out else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        for row in _bench_rows(a, methods, fixed, threads):
            w.writerow(row)
            out.flush()
    finally:
        if a.out:
            out.close()
    return EXIT_OK


def _cmd_plan(a) -> int:
    plan = build_plan(a.n, a.dir, a.s_hat, a.M)
    with open(a.out, "wb") as fh:
        save_plan(plan, fh)
    d = plan.decomposition
    print(f"{a.dir} plan: N={d.N} s={d.s} L={d.L} M={plan.M} submatrices={d.total_submatrices}")
    return EXIT_OK


def _cmd_selftest(a) -> int:
    from .selftest import run_checks

    numbers = None
    if a.only:
        try:
            numbers = {int(x) for x in a.only.split(",") if x.strip()}
        except ValueError:
            raise UsageError(f"--only expects comma separated integers, got {a.only!r}") from None
    results = run_checks(numbers, echo=print)
    if not results:
        raise UsageError(f"no checks selected by --only {a.only}")
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_SELFTEST


_COMMANDS = {
    "transform": _cmd_transform,
    "gen": _cmd_gen,
    "bench": _cmd_bench,
    "plan": _cmd_plan,
    "selftest": _cmd_selftest,
}


def run_cli(argv=None) -> int:
    parser = _build_parser()
    try:
        a = parser.parse_args(argv)
        return _COMMANDS[a.command](a)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, DomainError, SizeError, DirectionError, ResourceError, OSError) as exc:
        print(f"fastconnect: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(run_cli())
