import io
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from opuc_sumrules.cli import run
from opuc_sumrules.families import SWEEP_COLUMNS
from opuc_sumrules.formats import (
    alpha_from_json,
    alpha_to_json,
    moments_from_json,
    weight_from_csv,
)
from opuc_sumrules.sumrule import REPORT_COLUMNS


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return _write


def shell(args, stdin=None):
    return subprocess.run([sys.executable, "-m", "opuc_sumrules", *args], input=stdin,
                          capture_output=True, text=True, check=False)


def test_sumrule_zero_row(write):
    path = write("a.json", alpha_to_json(np.zeros(8)))
    code, out, _ = call("sumrule", "--m", "0", "--truncations", "8", path)
    assert code == 0
    header, row = out.strip().split("\n")
    assert header == ",".join(REPORT_COLUMNS)
    assert row == "0,8,64,0,0,0,0,0"


def test_sumrule_exact_and_human(write):
    path = write("a.json", alpha_to_json([0.5]))
    code, out, _ = call("sumrule", "--m", "1", "--truncations", "0,1", "--exact", path)
    rows = [line.split(",") for line in out.strip().split("\n")[1:]]
    assert code == 0 and float(rows[1][-1]) == pytest.approx(0.5, abs=1e-15)
    code, out, _ = call("sumrule", "--m", "1", "--truncations", "1", "--human", path)
    assert code == 0 and "," not in out and "correction" in out


def test_energy_example(write):
    path = write("a.json", json.dumps({"alpha": [[0.5, 0], [-0.5, 0]]}))
    code, out, _ = call("energy", "--m", "1", "--convention", "padded", path)
    header, row = (line.split(",") for line in out.strip().split("\n"))
    d = dict(zip(header, row))
    assert code == 0
    assert float(d["raw_energy"]) == 1.5 and float(d["weighted_energy"]) == 0.75
    assert float(d["toeplitz_form"]) == pytest.approx(0.75, abs=1e-15)
    assert d["symbol"] == "-1/2 1 -1/2"


def test_residual_certificate(write, rng):
    from conftest import random_disk

    poly = write("p.json", json.dumps({"c": ["-1", "3", "-3", "1"], "order": 2}))
    alpha = write("a.json", alpha_to_json(random_disk(rng, 200, 0.9)))
    code, out, _ = call("residual", "--k", "3", poly, alpha)
    lines = out.strip().split("\n")
    assert code == 0 and lines[0] == "N,partial_sum" and len(lines) == 202
    assert lines[-1].startswith("# certificate: divisible; bound B=8; max|S_N|=")
    assert lines[-1].endswith("<= B")


def test_residual_not_divisible_is_validation_error(write):
    poly = write("p.json", json.dumps({"c": ["1", "1"]}))
    alpha = write("a.json", alpha_to_json([0.1]))
    code, out, err = call("residual", "--k", "1", poly, alpha)
    assert code == 1 and err.startswith("error: NotDivisible:")


def test_residual_bound_below_data_is_rejected(write):
    poly = write("p.json", json.dumps({"c": ["-1", "3", "-3", "1"]}))
    alpha = write("a.json", alpha_to_json([0.9] * 5))
    code, _, err = call("residual", "--A", "0.01", poly, alpha)
    assert code == 1 and "exceeds the stated bound" in err


def test_probe_verdict_json(write):
    path = write("f.json", json.dumps({"kind": "power", "N": 512}))
    code, out, _ = call("probe", "--m", "1", "--truncations", "128,256,512", path)
    v = json.loads(out)
    assert code == 0
    assert set(v) >= {"family", "m", "flags", "series"}
    assert v["flags"]["energy_converged"] and v["flags"]["consistent"]
    assert [r["N"] for r in v["series"]] == [128, 256, 512]


def test_probe_needs_single_spec(write):
    path = write("f.json", json.dumps([{"kind": "power", "N": 8}] * 2))
    code, _, err = call("probe", "--m", "1", path)
    assert code == 1 and err.startswith("error: BadParameter:")


def test_sweep_to_file(write, tmp_path):
    specs = write("s.json", json.dumps([{"kind": "power", "N": 64}, {"kind": "random", "N": 64}]))
    target = tmp_path / "out.csv"
    code, out, _ = call("sweep", "--m", "1,2", "--truncations", "32,64", "--out", str(target), specs)
    lines = target.read_text().strip().split("\n")
    assert code == 0 and out == ""
    assert lines[0] == ",".join(SWEEP_COLUMNS) and len(lines) == 9


def test_weight_and_moments_commands(write):
    a = write("a.json", alpha_to_json([0.5]))
    code, out, _ = call("weight", "--grid", "64", a)
    w = weight_from_csv(out)
    assert code == 0 and w.grid_size == 64 and out.startswith("theta,w\n")
    wpath = write("w.csv", out)
    code, out, _ = call("moments", "--count", "3", wpath)
    assert code == 0 and moments_from_json(out).c[1] == pytest.approx(0.5, abs=1e-15)


def test_floats_use_17_significant_digits(write):
    a = write("a.json", alpha_to_json([1 / 3]))
    _, out, _ = call("weight", "--grid", "16", a)
    value = out.split("\n")[1].split(",")[1]
    assert len(value.replace(".", "").lstrip("0")) == 17


@pytest.mark.parametrize(
    "argv, code, kind",
    [
        (["sumrule", "--m", "5", "--truncations", "1"], 1, "BadParameter"),
        (["sumrule", "--truncations", "1"], 1, "ValidationError"),
        (["frobnicate"], 1, "ValidationError"),
        (["sumrule", "--m", "1", "--truncations", "x,y"], 1, "BadParameter"),
    ],
)
def test_usage_errors(write, argv, code, kind):
    path = write("a.json", alpha_to_json([0.1]))
    got, out, err = call(*argv, path)
    assert got == code and out == ""
    assert err.startswith(f"error: {kind}:") and err.count("\n") == 1


def test_input_errors(write):
    assert call("weight", "/nonexistent/a.json")[0] == 1
    bad = write("bad.json", "{")
    assert call("weight", bad)[2].startswith("error: BadParameter: invalid JSON")
    big = write("big.json", json.dumps({"alpha": [[1.0, 0.0]]}))
    assert call("weight", big)[2].startswith("error: InvalidCoefficient:")
    coarse = write("c.json", alpha_to_json([0.1] * 4))
    assert call("weight", "--grid", "16", coarse)[2].startswith("error: GridTooCoarse:")


def test_numerical_failure_exit_2(write):
    singular = write("m.json", json.dumps({"c": [[1, 0], [1, 0], [1, 0]]}))
    code, _, err = call("verblunsky", singular)
    assert code == 2 and err.startswith("error: NotPositiveDefinite:")
    zero_w = write("w.csv", "theta,w\n0,1\n1,0\n")
    code, _, err = call("moments", "--count", "0", zero_w)
    assert code == 2 and err.startswith("error: NonpositiveWeight:")


def test_pipe_round_trip():
    alpha = [0.5, -0.3 + 0.2j, 0.1j]
    w = shell(["weight", "--grid", "1024"], alpha_to_json(alpha))
    c = shell(["moments", "--count", "3"], w.stdout)
    a = shell(["verblunsky"], c.stdout)
    assert (w.returncode, c.returncode, a.returncode) == (0, 0, 0)
    np.testing.assert_allclose(alpha_from_json(a.stdout).values, alpha, atol=1e-8)


def test_determinism_and_threads(write):
    specs = write("s.json", json.dumps([{"kind": "random", "N": 256, "params": {"seed": 5}},
                                        {"kind": "alternating", "N": 256}]))
    args = ["sweep", "--truncations", "64,256", specs]
    first = shell(args).stdout
    assert first and shell(args).stdout == first
    threaded = subprocess.run([sys.executable, "-m", "opuc_sumrules", *args], capture_output=True,
                              text=True, env={**os.environ, "OPUC_THREADS": "4"})
    assert threaded.stdout == first
