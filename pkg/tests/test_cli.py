import csv
import io
import json
import subprocess
import sys

import pytest

from qwalk.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_mix_cycle5_csv():
    code, text = run("mix", "cycle(5)")
    assert code == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["vertex", "p_bar"]
    assert [float(r[1]) for r in rows[1:]] == pytest.approx([0.36, 0.16, 0.16, 0.16, 0.16], abs=1e-12)


def test_mix_json_and_table():
    code, text = run("mix", "path(3)", "--format", "json", "--start", "2")
    data = json.loads(text)
    assert data["start"] == 2 and data["order"] == 3
    assert [d["p_bar"] for d in data["distribution"]] == pytest.approx([0.25 * 1.5, 0.25, 0.375])
    assert data["mixing_ratio"] == pytest.approx(1.125)
    code, text = run("mix", "K(2)", "--format", "table")
    assert code == 0 and "0.500000" in text


def test_spectrum_json():
    code, text = run("spectrum", "cycle(4)")
    data = json.loads(text)
    assert code == 0
    assert {"order", "source", "eigenvalues", "multiplicities", "mu", "tau"} <= set(data)
    assert data["eigenvalues"] == pytest.approx([2, 0, -2], abs=1e-12)
    assert data["multiplicities"] == [1, 2, 1]
    assert data["mu"] == 2 and data["tau"] == 3


def test_verify_join_applies_formula():
    code, text = run("verify", "join(K(1), K(3))")
    data = json.loads(text)
    assert code == 0 and data["passed"]
    assert data["formula"] == "join" and data["formula_status"] == "applied"
    names = [c["name"] for c in data["checks"]]
    assert "formula_vs_projector" in names and "analytic_converges" in names


def test_verify_prism_c4_falls_back():
    code, text = run("verify", "cart(path(2), cycle(4))")
    data = json.loads(text)
    assert code == 2
    assert data["passed"]
    assert data["formula_status"].startswith("inapplicable")
    info = {i["name"]: i["max_abs_dev"] for i in data["informational"]}
    assert info["prism_unguarded_vs_projector"] == pytest.approx(0.125)


def test_verify_complete_reports_shifted_delta():
    code, text = run("verify", "K(4)")
    data = json.loads(text)
    assert code == 0
    info = {i["name"]: i["max_abs_dev"] for i in data["informational"]}
    assert info["complete_shifted_delta_vs_projector"] > 0.01


def test_verify_both_oracles():
    code, text = run("verify", "K(4)", "--oracle", "both", "--T", "500")
    data = json.loads(text)
    assert code == 0
    names = [c["name"] for c in data["checks"]]
    assert "quadrature_unitarity" in names and "formula_vs_quadrature" in names


def test_verify_csv():
    code, text = run("verify", "cycle(5)", "--format", "csv")
    assert code == 0
    assert text.splitlines()[0] == "check,max_abs_dev,tol,result"


def test_classify_complete():
    code, text = run("classify", "K(n)", "--range", "4:16:4")
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "n,order,ratio"
    assert [int(l.split(",")[0]) for l in lines[1:5]] == [4, 8, 12, 16]
    assert lines[-1] == "# threshold=4 bounded=false monotone=true verdict=not uniform"


def test_classify_cycles_uniform_json():
    code, text = run("classify", "cycle(n)", "--range", "5:11:2", "--format", "json")
    data = json.loads(text)
    assert data["verdict"] == "uniform" and data["bounded"]
    assert [r["n"] for r in data["rows"]] == [5, 7, 9, 11]


def test_deterministic_output():
    assert run("mix", "cart(path(3), circ(7; 1, 2))") == run("mix", "cart(path(3), circ(7; 1, 2))")
    assert run("verify", "cycle(6)") == run("verify", "cycle(6)")


def test_matrix_input(tmp_path):
    p = tmp_path / "k3.txt"
    p.write_text("0 1 1\n1 0 1\n1 1 0\n")
    code, text = run("mix", "--matrix", str(p))
    assert code == 0
    assert [float(r.split(",")[1]) for r in text.splitlines()[1:]] == pytest.approx([5 / 9, 2 / 9, 2 / 9])


def test_require_connected(capsys):
    code, text = run("mix", "empty(3)", "--require-connected")
    assert code == 1 and text == ""
    assert "error" in capsys.readouterr().err
    assert run("mix", "cycle(3)", "--require-connected")[0] == 0


def test_parse_error_reports_offset(capsys):
    code, text = run("mix", "circ(8; 1, 4")
    assert code == 1 and text == ""
    assert "offset 13" in capsys.readouterr().err


def test_size_cap(monkeypatch, capsys):
    monkeypatch.setenv("QWALK_SIZE_CAP", "10")
    code, text = run("mix", "cycle(11)")
    assert code == 1 and text == ""
    assert run("mix", "cycle(10)")[0] == 0


def test_bad_start(capsys):
    code, text = run("mix", "cycle(4)", "--start", "4")
    assert code == 1 and text == ""


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "qwalk.cli", "mix", "K(2)"], capture_output=True, text=True)
    assert r.returncode == 0
    assert r.stdout.splitlines() == ["vertex,p_bar", "0,0.5", "1,0.5"]
