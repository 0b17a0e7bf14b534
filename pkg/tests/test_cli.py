import csv
import io
import json
import subprocess
import sys

import pytest

from conftest import FIXTURES
from orthoreal.cli import run

H_SPACE, H_MATRIX = str(FIXTURES / "h_q3.space"), str(FIXTURES / "h_q3.matrix")


def invoke(tmp_path, *argv, name="out.json"):
    out = tmp_path / name
    rc = run([*argv, "--out", str(out)])
    return rc, out


def load(tmp_path, *argv):
    rc, out = invoke(tmp_path, *argv)
    assert rc == 0
    return json.loads(out.read_text())


def test_element_info(tmp_path):
    doc = load(tmp_path, "element", "info", "--space", H_SPACE, "--matrix", H_MATRIX)
    assert doc["schema"] == "orthoreal/1"
    assert doc["field"] == {"q": 3, "p": 3, "k": 1}
    r = doc["result"]
    assert r["det"] == 1 and r["in_Omega"] and r["in_SO"]
    assert sorted(e for _, e in r["elementary_divisors"]) == [1, 1, 2, 2]
    assert "conventions" in doc and "field_elements" in doc["conventions"]


def test_decompose(tmp_path):
    r = load(tmp_path, "decompose", "--space", H_SPACE, "--matrix", H_MATRIX)["result"]
    assert r["blocks"]
    assert all(r["invariants"].values())


def test_reality_projective(tmp_path):
    r = load(tmp_path, "reality", "--space", H_SPACE, "--matrix", H_MATRIX, "--group", "omega",
             "--projective")["result"]
    assert r["is_real"] and not r["is_strongly_real"]
    assert r["is_real_mod_z"] and not r["is_strongly_real_mod_z"]


def test_census_json_and_csv(tmp_path):
    doc = load(tmp_path, "census", "--type", "minus", "--n", "6", "--q", "2", "--group", "omega")
    assert doc["result"]["n_classes"] == 20 and doc["result"]["n_real"] == 10
    rc, out = invoke(tmp_path, "census", "--type", "minus", "--n", "6", "--q", "2", "--group", "omega",
                     "--format", "csv", name="c.csv")
    assert rc == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert len(rows) == 20
    assert sum(int(r["real"]) for r in rows) == 10
    assert sum(int(r["size"]) for r in rows) == doc["result"]["order"]


def test_census_sample(tmp_path):
    r = load(tmp_path, "census", "--n", "5", "--q", "3", "--group", "omega", "--sample", "10", "--seed", "3")
    assert r["result"]["count"] == 10 and r["result"]["seed"] == 3


def test_reports_are_byte_identical(tmp_path):
    argv = ["census", "--n", "4", "--q", "3", "--group", "so"]
    _, a = invoke(tmp_path, *argv)
    first = a.read_bytes()
    _, b = invoke(tmp_path, *argv)
    assert b.read_bytes() == first


def test_construct_writes_fixture_files(tmp_path, capsys):
    d = tmp_path / "h"
    rc = run(["construct", "--name", "h", "--q", "3", "--out", str(d)])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["result"]["ok"]
    assert sorted(p.name for p in d.iterdir()) == ["h.json", "h.matrix", "h.space"]
    assert (d / "h.matrix").read_text() == (FIXTURES / "h_q3.matrix").read_text()
    # the written files round-trip through the element commands
    r = load(tmp_path, "reality", "--space", str(d / "h.space"), "--matrix", str(d / "h.matrix"),
             "--group", "omega")["result"]
    assert r["is_real"]


def test_chartable_fs_and_twist(tmp_path):
    doc = load(tmp_path, "chartable", "--n", "4", "--q", "3", "--type", "minus", "--group", "omega", "--fs")
    r = doc["result"]
    assert "values" not in r and sorted(r["degrees"]) == [1, 5, 5, 8, 8, 9, 10]
    assert all(r["checks"].values())
    twist = tmp_path / "s.matrix"
    twist.write_text("q=3 n=4 m=4\n1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n")
    r2 = load(tmp_path, "chartable", "--n", "4", "--q", "3", "--type", "minus", "--group", "omega",
              "--twist-by", str(twist))["result"]
    # twisting by the identity gives the ordinary indicators
    assert r2["twisted_indicators"] == r2["fs_indicators"]


@pytest.mark.parametrize("argv", [
    [],
    ["element"],
    ["census", "--n", "4", "--q", "6", "--group", "o"],
    ["census", "--n", "4", "--q", "3", "--group", "o", "--threads", "0"],
    ["reality", "--space", "/nonexistent", "--matrix", "/nonexistent", "--group", "o"],
])
def test_usage_errors(argv, capsys):
    assert run(argv) == 2


def test_unknown_flag_exits_2():
    with pytest.raises(SystemExit) as e:
        run(["census", "--bogus"])
    assert e.value.code == 2


def test_group_too_large_exit_code(tmp_path):
    rc, out = invoke(tmp_path, "census", "--n", "8", "--q", "2", "--group", "omega", "--cap", "1000")
    assert rc == 3
    assert json.loads(out.read_text())["error"]


def test_env_cap(tmp_path, monkeypatch):
    monkeypatch.setenv("ORTHOREAL_CAP", "100")
    rc, _ = invoke(tmp_path, "census", "--n", "4", "--q", "3", "--group", "o")
    assert rc == 3


def test_verify_quick_subset(tmp_path):
    rc, out = invoke(tmp_path, "verify-paper", "--budget", "quick", "--only", "1,6")
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["result"]["all_passed"] and [c["criterion"] for c in doc["result"]["criteria"]] == [1, 6]


def test_console_script_entry():
    p = subprocess.run([sys.executable, "-m", "orthoreal.cli", "--version"], capture_output=True, text=True)
    assert p.returncode == 0 and "orthoreal" in p.stdout
