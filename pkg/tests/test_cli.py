from __future__ import annotations

import json
import subprocess
import sys

import pytest

from cwb.cli import emit_report, main, run
from cwb.dsl import parse

TSV_FILE = """algebra TSV(a,b) {
  generators: L, Y, M;
  bracket L L = (d + 2*l)*L;
  bracket L Y = (d + a*l + b)*Y;
  bracket L M = (d + 2*(a-1)*l + 2*b)*M;
  bracket Y Y = (d + 2*l)*M;
}
"""


@pytest.fixture
def tsv(tmp_path):
    p = tmp_path / "tsv.lca"
    p.write_text(TSV_FILE)
    return str(p)


def test_check_passes(tsv, capsys):
    assert main(["check", tsv]) == 0
    assert "pass" in capsys.readouterr().out


def test_h2_at_a_special_point(tsv, capsys):
    assert main(["h2", tsv, "--deg", "6", "--at", "a=0,b=0"]) == 0
    out = capsys.readouterr().out
    assert "dim H2 = 3" in out
    assert "a(L,L)=l^3" in out


def test_cder_outer_derivation(tsv, capsys):
    assert main(["cder", tsv, "--deg-l", "4", "--deg-d", "4", "--at", "a=3/2,b=0"]) == 0
    assert "outer dim = 1" in capsys.readouterr().out


def test_json_report(tsv, tmp_path):
    out = tmp_path / "h2.json"
    assert main(["h2", tsv, "--at", "a=1,b=0", "--no-branches", "-o", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["passed"] and data["results"][0]["command"] == "h2"


def test_reports_are_deterministic(tsv, tmp_path):
    paths = [tmp_path / "r1.json", tmp_path / "r2.json"]
    for p in paths:
        assert main(["h2", tsv, "--at", "a=2,b=0", "--no-branches", "-o", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_report_writes_json_and_text(tmp_path):
    src = tmp_path / "vir.lca"
    src.write_text("algebra Vir() { generators: L; bracket L L = (d+2*l)*L; job check; job h2 --deg 6; }")
    out = tmp_path / "vir.json"
    assert main(["report", str(src), "-o", str(out)]) == 0
    data = json.loads(out.read_text())
    assert [r["command"] for r in data["results"]] == ["check", "h2"]
    assert "dim H2 = 1" in out.with_suffix(".txt").read_text()


def test_empty_job_list_gives_an_empty_report():
    js, text = emit_report([])
    data = json.loads(js)
    assert data["results"] == [] and data["passed"]
    assert text == ""


def test_shipped_family_reference(capsys):
    assert main(["check", "@tsv_c"]) == 0
    assert main(["gd", "@tsv_c"]) == 1
    assert main(["gd", "@v_ab"]) == 0


def test_usage_errors(tsv, tmp_path, capsys):
    assert main(["check", str(tmp_path / "missing.lca")]) == 2
    assert main(["h2", tsv, "--at", "q=1"]) == 2
    assert main(["check", "@nope"]) == 2
    bad = tmp_path / "bad.lca"
    bad.write_text("algebra X() { generators: L; bracket L L = (d+2*l)*L*L; }")
    assert main(["check", str(bad)]) == 2
    assert main(["check", tsv, "-o", str(tmp_path / "no" / "dir" / "x.json")]) == 2


def test_failing_check_exits_one(tmp_path):
    bad = tmp_path / "bad.lca"
    bad.write_text("algebra X() { generators: L, M; bracket L L = (d+2*l)*L; bracket L M = (d-7*l)*M;"
                   " bracket M M = (d+2*l)*L; }")
    assert main(["check", str(bad)]) == 1


def test_solve_command(tmp_path, capsys):
    src = tmp_path / "ans.lca"
    src.write_text("algebra A(g1,g2) { generators: L, Y, M; bracket L L = (d+2*l)*L;"
                   " bracket L Y = (d+l)*Y; bracket Y Y = (d+g1*l+g2)*M; bracket L M = d*M; }")
    assert main(["solve", str(src), "--unknowns", "g1,g2"]) == 0
    out = capsys.readouterr().out
    assert "g1 = 2" in out and "g2 = 0" in out


def test_run_returns_results():
    doc = parse(TSV_FILE)
    status, results = run(doc, "report")
    assert status == 0 and results


def test_console_entry_point(tsv):
    proc = subprocess.run([sys.executable, "-m", "cwb.cli", "h2", tsv, "--at", "a=0,b=0"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "dim H2 = 3" in proc.stdout
