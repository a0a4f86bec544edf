import csv
import io
import json
import math
import subprocess
import sys

import pytest

from smw.cli import main


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


@pytest.mark.parametrize("argv,want", [
    (["count", "--model", "s31", "--lambda", "0", "-n", "3", "--from", "1", "--to", "2"], "3"),
    (["count", "--model", "s32c2", "-n", "4", "-h", "2", "--from", "1", "--to", "2"], "8"),
    (["count", "--model", "s21", "-n", "1", "--from", "2", "--to", "2"], "1"),
    (["count", "--model", "s32c2", "-n", "4", "-h", "2", "--from", "1", "--to", "2", "--tilde"], "2"),
])
def test_count_examples(argv, want):
    code, out = run("--quiet", *argv)
    assert code == 0 and out.strip() == want


def test_count_all_methods():
    code, out = run("--quiet", "count", "--model", "s31", "-n", "6", "-h", "1", "--from", "1",
                    "--to", "3", "--all-methods")
    lines = out.splitlines()
    assert code == 0 and lines[-1] == "agree" and len(lines) == 5


def test_count_cap_exit():
    code, _ = run("--quiet", "count", "--model", "s32c2", "-n", "14", "--from", "1", "--to", "1",
                  "--method", "enum")
    assert code == 2


def test_series():
    code, out = run("--quiet", "series", "--model", "s21", "--quantity", "11", "--order", "5")
    assert out.split() == ["1", "1", "2", "4", "8", "16"]


def test_gsd_tables():
    code, out = run("--quiet", "gsd", "--model", "s31", "--lambda", "0", "-n", "4..7")
    rows = json.loads(out)
    assert code == 0 and [r["gsd_spectral"] for r in rows] == [5] * 4
    assert all(r["agree"] for r in rows)
    code, out = run("--quiet", "--format", "csv", "gsd", "--topology", "ring", "-n", "5..7")
    assert [line.split(",")[2] for line in out.splitlines()[1:]] == ["2"] * 3
    code, out = run("--quiet", "gsd", "--lambda1", "0", "--lambda2", "0", "-n", "4..7")
    g = [r["gsd_spectral"] for r in json.loads(out)]
    assert g == sorted(g) and g[0] < g[-1]


def test_ham_export(tmp_path):
    code, out = run("--quiet", "ham-export", "--model", "s21", "-n", "2")
    assert code == 0 and all(len(line.split()) == 3 for line in out.splitlines())
    f = tmp_path / "h.coo"
    run("--quiet", "ham-export", "--model", "s21", "-n", "2", "--out", str(f))
    assert f.read_text() == out


def test_classes():
    code, out = run("--quiet", "classes", "--model", "s31", "-n", "3")
    rows = json.loads(out)
    assert sum(r["survives"] for r in rows) == 5


def test_entropy():
    code, out = run("--quiet", "--format", "csv", "entropy", "--model", "s21", "--sector", "11",
                    "-n", "5")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert out.splitlines()[0] == "model,sector,n,S,method" and len(rows) == 1
    assert math.isclose(float(rows[0]["S"]), math.log(2), rel_tol=1e-15)
    code, out = run("--quiet", "entropy", "--model", "s31", "--lambda", "0", "--method", "fit")
    rep = json.loads(out)
    assert abs(rep["constant"] - 0.4468) < 0.01
    code, out = run("--quiet", "entropy", "--model", "s31", "-n", "3", "--method", "density")
    assert math.isclose(float(json.loads(out)[0]["S"]),
                        float(json.loads(run("--quiet", "entropy", "-n", "3")[1])[0]["S"]),
                        abs_tol=1e-12)


def test_errors():
    assert run("--quiet", "entropy", "--model", "s31", "--lambda", "1", "--sector", "12",
               "-n", "5")[0] == 1
    assert run("--quiet", "--precision", "10", "series")[0] == 1
    assert run("--quiet", "gsd", "--model", "s32c2", "-n", "9")[0] == 2


def test_verify_only():
    code, out = run("--quiet", "verify", "--only", "2,4")
    assert code == 0 and out.splitlines()[-1] == "2/2 checks passed"
    assert run("--quiet", "verify", "--only", "99")[0] == 1


def test_determinism_and_cache(tmp_path):
    argv = [sys.executable, "-m", "smw.cli", "--quiet", "count", "--model", "s31", "-n", "40",
            "-h", "2", "--from", "1", "--to", "2"]
    plain = subprocess.run(argv, capture_output=True, text=True, check=True)
    again = subprocess.run(argv, capture_output=True, text=True, check=True)
    assert plain.stdout == again.stdout and plain.stderr == ""
    env = {"SMW_CACHE_DIR": str(tmp_path), "PATH": ""}
    cold = subprocess.run(argv, capture_output=True, text=True, check=True, env=env)
    warm = subprocess.run(argv, capture_output=True, text=True, check=True, env=env)
    assert cold.stdout == warm.stdout == plain.stdout
    files = list(tmp_path.glob("*.json"))
    assert files
    for f in files:
        f.write_text("{broken")
    rebuilt = subprocess.run(argv, capture_output=True, text=True, check=True, env=env)
    assert rebuilt.stdout == plain.stdout


def test_phase_report_quick():
    code, out = run("--quiet", "phase-report", "--quick")
    assert code == 0 and "## mu axis" in out and "| 4 | 5 | 7 | 3 |" in out
