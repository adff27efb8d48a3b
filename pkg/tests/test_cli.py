import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from c5extremal.cli import run
from c5extremal.graph import petersen, to_graph6
from c5extremal.grid import clear_cache

PETERSEN = to_graph6(petersen())


def call(*argv, stdin=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_count_petersen():
    code, out, _ = call("count", "--pattern", "c5", PETERSEN)
    assert code == 0 and out.strip() == "12"


def test_count_from_stdin(monkeypatch):
    code, out, _ = call("count", stdin=f"{PETERSEN}\nDhc\n", monkeypatch=monkeypatch)
    assert code == 0 and out.split() == ["12", "1"]


def test_count_from_file(tmp_path):
    f = tmp_path / "g.g6"
    f.write_text(PETERSEN + "\n")
    assert call("count", "--file", str(f))[1].strip() == "12"


@pytest.mark.parametrize(
    "argv",
    [
        ["frobnicate"],
        ["count", "--bogus"],
        [],
        ["count", "not-graph6!"],
        ["count", "--pattern", "c9", "Dhc"],
        ["search", "--climb", "10"],
        ["limit-density", "--sample-depth", "3"],
        ["search", "--exact", "12"],
        ["construct", "--tree", "Q7"],
        ["construct", "--tree", "[[],[]]"],
        ["construct", "--tree", "C5[E2"],
        ["construct", "--tree", "C5(1,2"],
    ],
)
def test_usage_errors_exit_2(argv):
    code, out, err = call(*argv)
    assert code == 2 and out == "" and err


def test_construct_and_recursion_value():
    code, out, _ = call("construct", "--tree", "C5^1")
    assert out.strip() == "Dhc"
    assert call("recursion-value", "26")[1].strip() == "3756"


def test_limit_density_json_round_trip():
    code, out, _ = call("limit-density", "--pattern", "c31111", "--json", "--no-timestamp")
    doc = json.loads(out)
    assert code == 0 and "timestamp" not in doc
    assert Fraction(doc["payload"]["density"]["exact"]) == Fraction(5, 93)
    assert doc["payload"]["density"]["decimal"] == "0.0537634408602"
    assert doc["tool_version"]


def test_timestamp_present_by_default():
    doc = json.loads(call("qp-bounds", "--json")[1])
    assert "timestamp" in doc


def test_verify_claims_exit_codes():
    code, out, _ = call("verify-claims", "--rhs", "derived", "--json", "--no-timestamp",
                        "--derived-steps", "100")
    doc = json.loads(out)
    assert code == 0 and len(doc["payload"]) == 11 and doc["pass"] is True
    assert all("/" in r["recomputed_value"]["exact"] for r in doc["payload"])
    code, out, _ = call("verify-claims", "--rhs", "printed", "--derived-steps", "100")
    assert code == 1 and len(json.loads(out)) == 11


def test_verify_claims_table():
    code, out, _ = call("verify-claims", "--table", "--derived-steps", "100")
    assert code == 0 and "nofunky.G-side" in out and "FAIL" not in out


def test_analyze_best_and_given_pentagon():
    code, out, _ = call("analyze", "Dhc")
    doc = json.loads(out)
    assert code == 0 and doc["f"]["exact"] == "0/1"
    code, out, _ = call("analyze", "--pentagon", "0", "1", "2", "3", "4", "Dhc")
    assert code == 0
    assert call("analyze", "--pentagon", "0", "2", "1", "3", "4", "Dhc")[0] == 2


def test_grid_certify_modes():
    code, out, _ = call("grid-certify", "--steps", "20", "--mode", "unconstrained")
    assert code == 0 and "certificate" not in json.loads(out)
    code, out, _ = call("grid-certify", "--steps", "100", "--lipschitz", "paper")
    assert code == 0 and json.loads(out)["certificate"]["pass"]


DETERMINISM = [
    ["construct", "--tree", "balanced:26", "--json"],
    ["recursion-value", "100", "--json"],
    ["count", "--pattern", "c22111", PETERSEN, "--json"],
    ["analyze", PETERSEN, "--json"],
    ["limit-density", "--pattern", "c5", "--sample-depth", "5", "--samples", "3000", "--seed", "9", "--json"],
    ["qp-bounds", "--rhs", "printed", "--json"],
    ["search", "--exact", "7", "--json"],
    ["search", "--climb", "11", "--seed", "3", "--iters", "30", "--json"],
    ["verify-claims", "--derived-steps", "100", "--json"],
    ["report", "--derived-steps", "100", "--json"],
]


@pytest.mark.parametrize("argv", DETERMINISM, ids=lambda a: a[0])
def test_byte_identical_runs(argv):
    outs = {call(*argv, "--no-timestamp")[1] for _ in range(3)}
    assert len(outs) == 1


def test_grid_certify_thread_independent():
    outs = set()
    for threads in ("1", "8", "1"):
        clear_cache()
        code, out, _ = call("grid-certify", "--steps", "40", "--threads", threads, "--json", "--no-timestamp")
        outs.add(out)
    assert len(outs) == 1


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "c5extremal.cli", "count", PETERSEN],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "12"
    proc = subprocess.run([sys.executable, "-m", "c5extremal.cli", "frobnicate"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 2 and "usage" in proc.stderr
