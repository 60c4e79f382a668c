import json
import subprocess
import sys

import pytest

from dcrit.cli import main
from dcrit.report import SCHEMA, Report

from conftest import BUNDLED


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_list_specs(capsys):
    code, out, _ = run(capsys, "list-specs")
    assert code == 0
    assert out.split() == sorted(BUNDLED)


def test_point_cohomology(capsys):
    code, out, _ = run(capsys, "cohomology", "pt_z2.spec", "--complex", "dcrit", "--degrees", "0..4",
                       "--weights", "0..0", "--format", "json")
    assert code == 0
    rep = Report.from_json(out)
    (b,) = rep.betti_reports()
    assert b.betti_vector() == [1, 0, 0, 0, 0]


def test_cubic_cohomology(capsys):
    code, out, _ = run(capsys, "cohomology", "a1_cubic.spec", "--complex", "z", "--degrees", "-1..0",
                       "--weights", "0..6", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["schema"] == SCHEMA
    assert data["tasks"][0]["result"]["totals"] == {"-1": 0, "0": 2}


def test_malformed_file(tmp_path, capsys):
    p = tmp_path / "bad.spec"
    p.write_text("[ring]\nvariables = x\n[group]\nclass = trivial\n[function]\nf = x^^2\n")
    code, out, err = run(capsys, "validate", str(p))
    assert code == 2
    assert out == ""
    e = json.loads(err)
    assert e["error"] == "parse"
    assert (e["line"], e["column"]) == (6, 7)


def test_missing_file(capsys):
    code, _, err = run(capsys, "validate", "nope.spec")
    assert code == 2
    assert json.loads(err)["error"] == "io"


def test_bad_range_is_usage_error(capsys):
    code, _, err = run(capsys, "cohomology", "a1_cubic.spec", "--degrees", "1..x")
    assert code == 2
    assert json.loads(err)["error"] == "usage"


def test_validation_failure(tmp_path, capsys):
    p = tmp_path / "ninv.spec"
    p.write_text("[ring]\nvariables = x\n[group]\nclass = cyclic\norder = 2\n[coaction]\n"
                 "g1: x = -x\n[function]\nf = x^3\n")
    code, out, err = run(capsys, "build", str(p))
    assert code == 3
    e = json.loads(err)
    assert e["error"] == "validation"
    assert "e_g1" in e["witness"]
    code, out, err = run(capsys, "validate", str(p), "--format", "json")
    assert code == 3
    checks = json.loads(out)["tasks"][0]["result"]["checks"]
    assert [c["ok"] for c in checks] == [True, True, False]


def test_dcrit_needs_finite_group(capsys):
    code, _, err = run(capsys, "cohomology", "a2_torus.spec", "--complex", "dcrit")
    assert code == 4
    assert json.loads(err)["error"] == "computation"


def test_truncated_mode(capsys):
    code, out, _ = run(capsys, "cohomology", "a1_cubic.spec", "--cap-poly", "6", "--cap-word", "3",
                       "--degrees", "-1..0", "--weights", "0..3", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["provenance"]["mode"] == "truncated"
    assert data["tasks"][0]["result"]["caps"] == {"poly": 6, "word": 3}


@pytest.mark.parametrize("name", BUNDLED)
def test_report_round_trip(name, tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, "report", name, "--format", "json", "--out", str(out))
    assert code == 0
    rep = Report.from_json(out.read_text())
    assert rep.to_json() == out.read_text()
    for t, b in zip([t for t in rep.tasks if t["task"] == "cohomology"], rep.betti_reports()):
        assert {str(k): v for k, v in b.totals().items()} == t["result"]["totals"]
    assert rep.tasks[0]["task"] == "validate"
    assert rep.tasks[0]["result"]["ok"]


def test_text_report(capsys):
    code, out, _ = run(capsys, "report", "a2_torus.spec")
    assert code == 0
    assert "== symplectic-check" in out
    assert "FAIL" not in out


def test_jobs_do_not_change_output(capsys):
    args = ["cohomology", "a2_torus.spec", "--degrees", "-3..0", "--weights", "0..6", "--format", "json"]
    _, a, _ = run(capsys, *args, "--jobs", "1")
    _, b, _ = run(capsys, *args, "--jobs", "2")
    assert a == b


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "dcrit.cli", "validate", "a1_cubic.spec"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert "ok: True" in r.stdout


def test_broken_group_table(tmp_path, capsys):
    p = tmp_path / "table.spec"
    p.write_text("[ring]\nvariables = x\n[group]\nclass = finite\nelements = e, a\n"
                 "table = e*e=e, e*a=a, a*e=a, a*a=a\n[function]\nf = x^2\n")
    code, _, err = run(capsys, "validate", str(p))
    assert code == 3
    e = json.loads(err)
    assert e["error"] == "validation"
    assert e["line"] == 4
