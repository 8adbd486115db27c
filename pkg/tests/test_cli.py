import io
import json
import subprocess
import sys

import pytest

from bilipcurves.cli import run_cli

CURVES = {
    "cusp": "type: plane\npoly: y^2 - x^3\n",
    "node": "type: plane\npoly: y^2 - x^2*(x+1)\n",
    "conic": "type: plane\npoly: x^2 + y^2 - 1\n",
    "twisted": "type: param\nparam: t, t^2, t^3\n",
    "t234": "type: param\nparam: t^2, t^3, t^4\n",
    "twisted_ci": "type: ci3\neqs: y - x^2; z - x^3\n",
    "bad_syntax": "type: plane\npoly: y^2 - 3x\n",
    "not_sqfree": "type: plane\npoly: (y - x^2)*(y - x^2)\n",
}


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, text in CURVES.items():
        p = tmp_path / f"{name}.curve"
        p.write_text(text)
        out[name] = str(p)
    return out


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli(list(argv), out, err)
    doc = json.loads(out.getvalue()) if out.getvalue() else None
    return code, doc, out.getvalue(), err.getvalue()


def test_compare_cusp_node(files):
    code, doc, _, err = run("compare", files["cusp"], files["node"])
    assert code == 1 and doc["result"]["verdict"] == "not-equivalent"
    assert "verdict: not-equivalent" in err


def test_compare_cusp_self(files):
    code, doc, _, _ = run("compare", files["cusp"], files["cusp"])
    assert code == 0 and doc["result"]["verdict"] == "equivalent"


def test_analyze_conic(files):
    code, doc, _, _ = run("analyze", files["conic"])
    res = doc["result"]
    assert code == 0 and res["degrees"] == [2] and res["genus"] == [0]
    assert not [o for o in res["orbits"] if o["site"] == "finite"]


def test_report_document_shape(files):
    _, doc, _, _ = run("analyze", files["cusp"])
    assert doc["schema"] == 1 and doc["tool"] == "bilipcurves"
    assert doc["command"] == ["analyze", files["cusp"]]
    assert len(doc["inputs"][0]["sha256"]) == 64
    assert doc["assumptions"]
    assert doc["result"]["provenance"] == "exact"


def test_analyze_space(files):
    code, doc, _, _ = run("analyze", files["t234"])
    assert code == 0 and doc["result"]["singular_count"] == 1 and doc["result"]["degree"] == 4


def test_project(files):
    code, doc, _, _ = run("project", files["twisted"], "--seed", "4")
    assert code == 0
    res = doc["result"]
    assert res["certificate"]["passed"] and res["partition"]["new_node_count"] == 1
    assert doc["seeds"] == {"projection": 4}


def test_project_rejects_plane(files):
    code, doc, _, err = run("project", files["cusp"])
    assert code == 3 and doc is None and "space curve" in err


def test_verify_infinity(files):
    code, doc, _, _ = run("verify-infinity", files["twisted"], "--radius", "100", "--samples", "2000")
    assert code == 0 and doc["result"]["verdict"] == "pass"
    code, doc, _, _ = run("verify-infinity", files["twisted"], "--center", "0,0,1", "--samples", "2000")
    assert code == 1 and doc["result"]["verdict"] == "fail"
    assert doc["result"]["min_ratio"] < 0.01


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze"],
        ["frobnicate"],
        ["compare", "a"],
        ["analyze", "/nonexistent/file.curve"],
        ["verify-infinity", "x", "--bogus"],
    ],
)
def test_input_errors_exit_3(argv):
    code, doc, _, err = run(*argv)
    assert code == 3 and doc is None and err


def test_bad_files_exit_3(files):
    code, _, _, err = run("analyze", files["bad_syntax"])
    assert code == 3 and "line 2" in err
    code, _, _, err = run("analyze", files["not_sqfree"])
    assert code == 3 and "not squarefree" in err
    code, _, _, err = run("compare", files["cusp"], files["twisted"])
    assert code == 3
    code, _, _, err = run("verify-infinity", files["twisted"], "--center", "1,2")
    assert code == 3 and "coordinates" in err


def test_exit_code_matches_verdict(files):
    mapping = {"equivalent": 0, "not-equivalent": 1, "inconclusive": 2}
    for a, b in [("cusp", "node"), ("node", "node"), ("twisted", "t234"), ("twisted", "twisted_ci")]:
        code, doc, _, _ = run("compare", files[a], files[b])
        assert code == mapping[doc["result"]["verdict"]]


def test_byte_stable_reports(files):
    for argv in (["compare", files["twisted"], files["twisted_ci"], "--seed", "2"],
                 ["analyze", files["node"]],
                 ["verify-infinity", files["twisted"], "--samples", "500", "--seed", "1"]):
        assert run(*argv)[2] == run(*argv)[2]


def test_timing_only_on_stderr(files):
    _, _, out, err = run("analyze", files["cusp"])
    assert "time" not in json.loads(out) and "s]" in err


def test_console_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "bilipcurves.cli", "analyze", files["cusp"]],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["result"]["genus"] == [0]
