import csv
import io
import subprocess
import sys

import numpy as np
import pytest

from fastconnect import cli, selftest
from fastconnect.cli import auto_reps, run_cli
from fastconnect.errors import FormatError
from fastconnect.executor import direct_transform
from fastconnect.gamma_ratio import lambda_vector
from fastconnect.oracle import e_inf
from fastconnect.vectorfile import MAGIC, read_text, read_vector, write_text, write_vector


@pytest.fixture
def tmp(tmp_path):
    return lambda name: str(tmp_path / name)


def _run(argv):
    return run_cli([str(a) for a in argv])


def test_gen_transform_roundtrip(tmp):
    assert _run(["gen", "--n", 500, "--decay", 0.5, "--seed", 3, "--out", tmp("f.bin")]) == 0
    assert _run(["transform", "--dir", "l2c", "--method", "direct", "--in", tmp("f.bin"), "--out", tmp("z.bin")]) == 0
    assert _run(["transform", "--dir", "c2l", "--method", "direct", "--in", tmp("z.bin"), "--out", tmp("g.bin")]) == 0
    assert e_inf(read_vector(tmp("g.bin")), read_vector(tmp("f.bin"))) <= 1e-14


def test_fmm_keeps_length(tmp):
    _run(["gen", "--n", 1000, "--out", tmp("f.bin")])
    assert _run(["transform", "--dir", "l2c", "--in", tmp("f.bin"), "--out", tmp("z.bin")]) == 0
    assert read_vector(tmp("z.bin")).shape == (1000,)


@pytest.mark.parametrize("n", [128, 1000, 4096, 1 << 15])
@pytest.mark.parametrize("direction", ["l2c", "c2l"])
def test_fmm_matches_direct(tmp, n, direction):
    _run(["gen", "--n", n, "--decay", 0.5, "--out", tmp("f.bin")])
    for method in ("fmm", "reference"):
        assert _run(["transform", "--dir", direction, "--method", method, "--in", tmp("f.bin"), "--out", tmp("z.bin")]) == 0
        f = read_vector(tmp("f.bin"))
        assert e_inf(read_vector(tmp("z.bin")), direct_transform(direction, f, lambda_vector(n))) <= 1e-13


def test_short_input_falls_back(tmp, capsys):
    _run(["gen", "--n", 50, "--out", tmp("f.bin")])
    assert _run(["transform", "--dir", "l2c", "--in", tmp("f.bin"), "--out", tmp("z.bin")]) == 0
    assert "direct method" in capsys.readouterr().err
    f = read_vector(tmp("f.bin"))
    assert np.array_equal(read_vector(tmp("z.bin")), direct_transform("l2c", f, lambda_vector(50)))


def test_text_mode(tmp):
    _run(["gen", "--n", 300, "--text", "--out", tmp("f.txt")])
    assert _run(["transform", "--dir", "l2c", "--text", "--in", tmp("f.txt"), "--out", tmp("z.txt")]) == 0
    z = read_text(tmp("z.txt"))
    assert z.shape == (300,)
    assert e_inf(z, direct_transform("l2c", read_text(tmp("f.txt")), lambda_vector(300))) <= 1e-13


def test_plan_file(tmp, capsys):
    assert _run(["plan", "--dir", "c2l", "--n", 2048, "--out", tmp("p.plan")]) == 0
    assert "N=2048" in capsys.readouterr().out
    _run(["gen", "--n", 2000, "--out", tmp("f.bin")])
    assert _run(["transform", "--dir", "c2l", "--plan", tmp("p.plan"), "--in", tmp("f.bin"), "--out", tmp("z.bin")]) == 0
    f = read_vector(tmp("f.bin"))
    assert e_inf(read_vector(tmp("z.bin")), direct_transform("c2l", f, lambda_vector(2000))) <= 1e-13
    assert _run(["transform", "--dir", "l2c", "--plan", tmp("p.plan"), "--in", tmp("f.bin"), "--out", tmp("z.bin")]) == 2
    _run(["gen", "--n", 3000, "--out", tmp("big.bin")])
    assert _run(["transform", "--dir", "c2l", "--plan", tmp("p.plan"), "--in", tmp("big.bin"), "--out", tmp("z.bin")]) == 2


def test_bench_csv(capsys):
    assert _run(["bench", "--min-log2", 10, "--max-log2", 11, "--reps", 2, "--methods", "fmm,reference,direct"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert [(int(r["N"]), r["method"]) for r in rows] == [
        (n, m) for n in (1024, 2048) for m in ("fmm", "reference", "direct")
    ]
    for r in rows:
        assert float(r["einf_vs_oracle"]) <= 1e-13
        assert float(r["exec_seconds"]) > 0
        if r["method"] == "fmm":
            assert float(r["flop_estimate"]) == 249 * int(r["N"])


def test_bench_to_file(tmp):
    assert _run(["bench", "--min-log2", 8, "--max-log2", 8, "--reps", 1, "--out", tmp("b.csv")]) == 0
    with open(tmp("b.csv")) as fh:
        assert fh.readline().startswith("N,method,plan_seconds")


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["transform", "--dir", "l2c"],
        ["transform", "--dir", "sideways", "--in", "a", "--out", "b"],
        ["gen", "--n", 0, "--out", "x"],
        ["gen", "--n", 4, "--decay", -1, "--out", "x"],
        ["bench", "--reps", "many"],
        ["bench", "--reps", 0],
        ["bench", "--methods", "fmm,magic"],
        ["bench", "--min-log2", 12, "--max-log2", 10],
        ["selftest", "--only", "one"],
        ["selftest", "--only", "99"],
    ],
)
def test_usage_errors(argv, capsys):
    assert _run(argv) == 1
    captured = capsys.readouterr()
    assert captured.err
    assert "N,method" not in captured.out


def test_data_errors(tmp):
    assert _run(["transform", "--dir", "l2c", "--in", tmp("missing.bin"), "--out", tmp("z.bin")]) == 2
    with open(tmp("junk.bin"), "wb") as fh:
        fh.write(b"not a vector")
    assert _run(["transform", "--dir", "l2c", "--in", tmp("junk.bin"), "--out", tmp("z.bin")]) == 2
    with open(tmp("junk.txt"), "w") as fh:
        fh.write("1.0\nabc\n")
    assert _run(["transform", "--dir", "l2c", "--text", "--in", tmp("junk.txt"), "--out", tmp("z.txt")]) == 2
    write_vector(tmp("empty.bin"), np.zeros(0))
    assert _run(["transform", "--dir", "l2c", "--in", tmp("empty.bin"), "--out", tmp("z.bin")]) == 2
    with open(tmp("p.plan"), "wb") as fh:
        fh.write(b"garbage")
    write_vector(tmp("f.bin"), np.ones(8))
    assert _run(["transform", "--dir", "l2c", "--plan", tmp("p.plan"), "--in", tmp("f.bin"), "--out", tmp("z")]) == 2


def test_selftest_exit_codes(monkeypatch, capsys):
    assert _run(["selftest", "--only", "3"]) == 0
    assert "1/1 checks passed" in capsys.readouterr().out
    failing = ((3, "flop model", lambda: (False, "forced")),)
    monkeypatch.setattr(selftest, "CHECKS", failing)
    assert _run(["selftest", "--only", "3"]) == 3
    out = capsys.readouterr().out
    assert "[FAIL] 3. flop model: forced" in out and "0/1 checks passed" in out


def test_selftest_reports_exceptions(monkeypatch):
    def boom():
        raise RuntimeError("kaput")

    monkeypatch.setattr(selftest, "CHECKS", ((5, "boom", boom),))
    (res,) = selftest.run_checks()
    assert not res.passed and "kaput" in res.detail


def test_auto_reps():
    assert auto_reps(1 << 8) == 10_000
    assert auto_reps(1 << 16) == 1024
    assert auto_reps(1 << 26) == 3
    assert auto_reps(1 << 30) == 3


def test_min_seconds_takes_minimum(monkeypatch):
    ticks = iter([0.0, 5.0, 10.0, 12.0, 20.0, 23.0])
    monkeypatch.setattr(cli.time, "perf_counter", lambda: next(ticks))
    calls = []
    best, out = cli._min_seconds(lambda: calls.append(1) or len(calls), 3)
    assert best == 2.0 and out == 3


def test_vector_file_roundtrip(tmp):
    v = np.random.default_rng(0).standard_normal(77)
    write_vector(tmp("v.bin"), v)
    assert np.array_equal(read_vector(tmp("v.bin")), v)
    with open(tmp("v.bin"), "rb") as fh:
        raw = fh.read()
    assert raw.startswith(MAGIC)
    for bad in (raw[:-1], raw[:4], b"XXXXX" + raw[5:]):
        with open(tmp("bad.bin"), "wb") as fh:
            fh.write(bad)
        with pytest.raises(FormatError):
            read_vector(tmp("bad.bin"))
    write_text(tmp("v.txt"), v)
    assert np.array_equal(read_text(tmp("v.txt")), v)


def test_module_entry_point(tmp):
    proc = subprocess.run(
        [sys.executable, "-m", "fastconnect", "gen", "--n", "10", "--out", tmp("f.bin")], capture_output=True
    )
    assert proc.returncode == 0
    assert read_vector(tmp("f.bin")).shape == (10,)
    proc = subprocess.run([sys.executable, "-m", "fastconnect"], capture_output=True)
    assert proc.returncode == 1
