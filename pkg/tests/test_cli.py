import json
import subprocess
import sys

import pytest

from slicetorsion.cli import main
from slicetorsion.report import verify_report

from conftest import FIXTURE, ROOT


def run(argv, capsys):
    status = main(argv)
    out = capsys.readouterr().out
    return status, json.loads(out)


def test_bing_report(capsys):
    status, rep = run(["satellite", "bing", "--rep", str(FIXTURE), "--knot", "fig8", "--p", "2"], capsys)
    assert status == 0 and rep["schema"] == 1
    res = rep["result"]
    assert res["status"] == "NOT_SLICE"
    assert res["product_rational"] == "2115"
    assert sorted(res["eigenvalue_turns"]) == sorted(
        ["0", "1/2", "1/4", "3/4", "1/16", "9/16", "3/16", "11/16"])
    assert res["certificate"]["norm_test"]["obstruction"]["prime"] == 47
    assert verify_report(rep)


def test_unlink_report(capsys):
    status, rep = run(["torsion", "unlink", "--m", "2", "--rep", "trivial1", "--psi", "id2"], capsys)
    assert status == 0
    assert rep["result"]["display"] == "(1) / (1 - t2 - t1 + t1*t2)"
    assert verify_report(rep)


def test_alexander_report(capsys):
    status, rep = run(["alexander", "from-seifert", "--knot", "trefoil"], capsys)
    assert status == 0 and rep["result"]["coefficients"] == [1, -1, 1]


def test_slice_check_report(capsys):
    status, rep = run(["torsion", "slice-check", "--knot", "fig8", "--psi", "id1"], capsys)
    assert status == 0
    assert rep["result"]["check"]["status"] == "NOT_MEMBER"
    assert rep["result"]["rank"] == 0
    assert verify_report(rep)


def test_rep_reports(capsys):
    status, rep = run(["rep", "verify", "--rep", str(FIXTURE), "--p", "2"], capsys)
    assert status == 0 and rep["result"]["is_p_group"]
    assert rep["result"]["det_group"]["real_intersection"] == [1, -1]
    assert verify_report(rep)
    status, rep = run(["rep", "eigenvalues", "--rep", "bing_fig8", "--word", "[x,y]"], capsys)
    assert status == 0 and len(rep["result"]["eigenvalues"]) == 8
    assert verify_report(rep)


def test_norm_report(capsys):
    status, rep = run(["norm", "test", "45"], capsys)
    assert status == 0 and rep["result"]["status"] == "MEMBER"
    assert verify_report(rep)
    status, rep = run(["norm", "test", "-5", "--real-units", "1"], capsys)
    assert status == 0 and rep["result"]["status"] == "NOT_MEMBER"


def test_boundary_with_files(tmp_path, capsys):
    seifert = tmp_path / "A.json"
    seifert.write_text(json.dumps({"m": 2, "blocks": [[[[1, 1], [0, 1]], [[1, 0], [2, -1]]],
                                                      [[[1, 2], [0, -1]], [[-1, 1], [0, 0]]]]}))
    psi = tmp_path / "psi.json"
    psi.write_text(json.dumps({"rank": 1, "matrix": [[1, 1]]}))
    status, rep = run(["torsion", "boundary", "--seifert", str(seifert), "--rep", "trivial1",
                       "--psi", str(psi)], capsys)
    assert status == 0
    assert rep["result"]["rank"] == rep["result"]["expected_rank"] == 1
    assert verify_report(rep)


def test_satellite_factor_companion(tmp_path, capsys):
    comp = tmp_path / "k.json"
    comp.write_text(json.dumps({"alexander": [1, -3, 1]}))
    status, rep = run(["satellite", "factor", "--rep", str(FIXTURE), "--companion", str(comp)], capsys)
    assert status == 0 and rep["result"]["product_rational"] == "2115"
    assert verify_report(rep)


def test_report_verify_round_trip(tmp_path, capsys):
    out = tmp_path / "bing.json"
    assert main(["-o", str(out), "satellite", "bing", "--rep", str(FIXTURE), "--knot", "fig8"]) == 0
    capsys.readouterr()
    status, rep = run(["report", "verify", str(out)], capsys)
    assert status == 0 and rep["result"]["ok"] and rep["result"]["checks"]
    data = json.loads(out.read_text())
    data["result"]["product"]["coeffs"][0] = "2116"
    out.write_text(json.dumps(data))
    status, rep = run(["report", "verify", str(out)], capsys)
    assert status == 2 and rep["error"]["code"] == "CERTIFICATE_REJECTED"


@pytest.mark.parametrize("argv, code", [
    (["rep", "verify", "--rep", "missing.json"], "INPUT_ERROR"),
    (["torsion", "unlink", "--m", "2", "--psi", "id3"], "DIMENSION_MISMATCH"),
    (["torsion", "boundary", "--knot", "fig8", "--psi", "[[2]]"], "INPUT_ERROR"),
    (["satellite", "bing", "--rep", "trivial1", "--knot", "nonexistent"], "INPUT_ERROR"),
    (["norm", "test", "zero"], "INPUT_ERROR"),
    (["norm", "test", "0"], "INPUT_ERROR"),
])
def test_input_errors(argv, code, capsys):
    status, rep = run(argv, capsys)
    assert status == 2
    assert rep["error"]["code"] == code


def test_non_p_group_error(tmp_path, capsys):
    bad = tmp_path / "rep.json"
    bad.write_text(json.dumps({"size": 1, "conductor": 3, "generators": [
        {"perm": [1], "diag": [{"num": 1, "den": 3}]}, {"perm": [1], "diag": [{"num": 0, "den": 1}]}]}))
    status, rep = run(["satellite", "bing", "--rep", str(bad), "--knot", "fig8"], capsys)
    assert status == 2 and rep["error"]["code"] == "NOT_P_GROUP"


def test_budget_exit_code(monkeypatch, capsys):
    monkeypatch.setenv("TORSION_SEARCH_BUDGET", "1")
    status, rep = run(["norm", "test", "2115"], capsys)
    assert status == 3 and rep["error"]["code"] == "SEARCH_BUDGET_EXCEEDED"


def test_reports_are_byte_identical():
    cmd = [sys.executable, "-m", "slicetorsion", "satellite", "bing", "--rep", str(FIXTURE), "--knot", "fig8"]
    first = subprocess.run(cmd, capture_output=True, check=True, cwd=ROOT).stdout
    second = subprocess.run(cmd, capture_output=True, check=True, cwd=ROOT).stdout
    assert first == second and first.startswith(b"{")
