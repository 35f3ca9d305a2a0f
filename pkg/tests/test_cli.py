import io
import json
import subprocess
import sys

import numpy as np
import pytest

from crscope import __version__
from crscope.cli import run
from crscope.problems import BUILDERS, data_dir, dumps, load_shipped
from crscope.quadric import adams_m8, mlambda
from crscope.serialize import decode_quadric, encode_quadric

DATA = data_dir()


def call(argv, capsys, monkeypatch=None, stdin=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = run(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_examples_pipe_into_pencil_certify(capsys, monkeypatch):
    code, text, _ = call(["examples", "clifford8"], capsys)
    assert code == 0
    code, out, _ = call(["pencil", "certify", "--samples", "4096"], capsys, monkeypatch, stdin=text)
    rep = json.loads(out)
    assert code == 0 and rep["result"]["q_min"] == 4
    assert rep["options"]["samples"] == 4096 and rep["version"] == __version__


def test_quadric_analyze_mlambda_i(capsys):
    code, out, _ = call(["quadric", "analyze", str(DATA / "mlambda_i.json")], capsys)
    res = json.loads(out)["result"]
    assert code == 0
    assert res["transversality"]["transversal"] is False
    assert res["singular_scan"]["dimension"] == 2


def test_maxmod_totally_real_line_violates(capsys):
    code, out, _ = call(["maxmod", "verify", str(DATA / "totally_real_line.json")], capsys)
    rep = json.loads(out)
    assert code == 1 and rep["status"] == "violated"
    assert rep["result"]["max_modulus"]["satisfied"] is False
    assert rep["result"]["psi_region"]["psi"] == 2401


def test_maxmod_ball_domain_passes(capsys):
    code, out, _ = call(["maxmod", "verify", str(DATA / "mk_ball.json")], capsys)
    assert code == 0 and json.loads(out)["checks"] == {"max_modulus": True}


def test_crtype_and_patch_classify(capsys):
    code, out, _ = call(["crtype", str(DATA / "complex_line.json")], capsys)
    assert code == 0 and json.loads(out)["result"]["cr_type"] == {"m": 1, "h": 0}
    code, out, _ = call(["crtype", str(DATA / "totally_real_plane.json")], capsys)
    assert json.loads(out)["result"]["cr_type"] == {"m": 0, "h": 2}
    code, out, _ = call(["patch", "classify", str(DATA / "ak_grid.json")], capsys)
    summary = json.loads(out)["result"]["summary"]
    assert {"cr_type": [2, 0], "regular": False, "count": 1} in summary


def test_malformed_json_reports_position(capsys, monkeypatch):
    code, _, err = call(["pencil", "certify"], capsys, monkeypatch, stdin='{"kind": "pencil",\n  "payload": }')
    assert code == 2 and "line 2 column" in err


@pytest.mark.parametrize("doc", [
    {"kind": "quadric", "payload": {}},
    {"kind": "bogus", "payload": {}},
    {"kind": "pencil", "payload": {"matrices": [[[1, 2], [3, 4]]]}},
    {"kind": "pencil", "payload": {"matrices": [[[1, 0], [0, 1]]]}, "options": {"colour": 1}},
    {"kind": "pencil"},
])
def test_input_errors_exit_2(doc, capsys, monkeypatch):
    code, _, err = call(["pencil", "certify"], capsys, monkeypatch, stdin=json.dumps(doc))
    assert code == 2 and "input error" in err


def test_unknown_example_and_missing_file(capsys):
    assert call(["examples", "nope"], capsys)[0] == 2
    assert call(["crtype", "/nonexistent.json"], capsys)[0] == 2


def test_reports_are_byte_identical(capsys, monkeypatch):
    path = str(DATA / "r1r2_7.json")
    a = call(["pencil", "certify", path, "--seed", "5"], capsys)[1]
    b = call(["pencil", "certify", path, "--seed", "5", "--threads", "3"], capsys)[1]
    monkeypatch.setenv("CR_SCOPE_THREADS", "2")
    c = call(["pencil", "certify", path, "--seed", "5"], capsys)[1]
    assert a == b == c
    assert json.loads(a)["options"]["seed"] == 5


def test_markdown_and_out_file(tmp_path, capsys):
    out = tmp_path / "report.md"
    code, stdout, _ = call(["pencil", "certify", str(DATA / "clifford8.json"), "--md", "--out", str(out)], capsys)
    assert code == 0 and stdout == ""
    text = out.read_text()
    assert text.startswith("# crscope pencil certify") and "| span_bound | True |" in text


def test_examples_with_parameters(capsys, monkeypatch):
    code, text, _ = call(["examples", "mlambda", "--param", "[0, 2]"], capsys)
    assert code == 0
    q = decode_quadric(json.loads(text)["payload"])
    assert np.allclose(q.D[0], [[-2.0]])
    code, out, _ = call(["quadric", "analyze", "--grid", "6"], capsys, monkeypatch, stdin=text)
    assert json.loads(out)["result"]["transversality"]["transversal"] is False


def test_list_examples(capsys):
    code, out, _ = call(["examples", "--list"], capsys)
    assert code == 0 and "totally_real_line" in out.split()


def test_shipped_files_match_generators():
    for name, build in BUILDERS.items():
        assert load_shipped(name) == json.loads(dumps(build())), name
    assert sorted(p.stem for p in DATA.glob("*.json")) == sorted(BUILDERS)


@pytest.mark.parametrize("q", [mlambda(1 + 1j), adams_m8()])
def test_quadric_encoding_round_trip(q):
    back = decode_quadric(json.loads(json.dumps(encode_quadric(q))))
    for a, b in zip(q.B + q.C + q.D + q.H, back.B + back.C + back.D + back.H):
        assert np.array_equal(a, b)


def test_console_pipe_end_to_end():
    ex = subprocess.run([sys.executable, "-m", "crscope.cli", "examples", "clifford8"],
                        capture_output=True, text=True, check=True)
    res = subprocess.run([sys.executable, "-m", "crscope.cli", "pencil", "certify", "--samples", "4096"],
                         input=ex.stdout, capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["result"]["q_min"] == 4
