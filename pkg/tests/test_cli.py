import json
import subprocess
import sys

import pytest

from flagcodes import cli
from flagcodes.flags import read_code


def _json(capsys, argv, code=0):
    capsys.readouterr()
    assert cli.run(argv + ["--json"]) == code
    return json.loads(capsys.readouterr().out)


def test_gauss_and_count(capsys):
    assert _json(capsys, ["gauss", "5", "2", "2"])["value"] == 155
    assert _json(capsys, ["count", "4", "2"])["value"] == 315
    assert _json(capsys, ["count", "5", "2", "--type", "2,3"])["value"] == 155 * 7


def test_rset(capsys):
    out = _json(capsys, ["rset", "5", "5"])
    assert {tuple(r["r"]) for r in out["R"]} == {(1, 0, 0, 0), (0, 1, 1, 0), (0, 0, 0, 1)}


@pytest.mark.parametrize("method,value", [("anticode", 21), ("johnson", 63), ("best", 21)])
def test_bound_methods(capsys, method, value):
    out = _json(capsys, ["bound", "6", "8", "2", "--method", method])
    assert out["value"] == value
    assert _json(capsys, ["bound", "6", "8", "--method", "beta"])["beta"] == 4


def test_bound_usage_errors(capsys):
    assert _json(capsys, ["bound", "4", "2", "6"], code=2)["error"] == "usage"
    assert _json(capsys, ["bound", "4", "2", "--type", "3,1"], code=2)["error"] == "usage"


def test_construct_and_verify(tmp_path, capsys):
    path = tmp_path / "spread.code"
    out = _json(capsys, ["construct", "spread", "2", "-o", str(path)])
    assert (out["size"], out["min_distance"]) == (5, 4)
    assert len(read_code(path)[0]) == 5
    assert _json(capsys, ["verify", str(path), "--d", "4"])["ok"] is True
    assert _json(capsys, ["verify", str(path), "--d", "5"], code=3)["ok"] is False
    assert _json(capsys, ["verify", str(tmp_path / "missing.code")], code=3)["error"] == "verification"


def test_construct_variants(capsys):
    assert _json(capsys, ["construct", "pspread", "2"])["min_distance"] == 6
    out = _json(capsys, ["construct", "singer", "4", "--d", "3"])
    assert out["size"] == 15
    out = _json(capsys, ["construct", "mrd-cartesian", "3"])
    assert (out["size"], out["min_distance"]) == (256, 3)
    assert _json(capsys, ["construct", "singer", "4"], code=2)["error"] == "usage"


def test_search_with_group_and_exports(tmp_path, capsys):
    group = tmp_path / "g.txt"
    group.write_text("q=2\n0,1,0,0,0;0,0,1,0,0;0,0,0,1,0;0,0,0,0,1;1,0,1,1,1\n")
    lp, js, code = tmp_path / "m.lp", tmp_path / "m.json", tmp_path / "best.code"
    out = _json(capsys, ["search", "5", "4", "--group", str(group), "--export-lp", str(lp),
                         "--export-json", str(js), "-o", str(code)])
    assert out["status"] == "optimal" and out["best_value"] == 155
    assert lp.read_text().startswith("\\")
    assert json.loads(js.read_text())["lengths"]
    assert len(read_code(code)[0]) == 155


def test_search_budget_exit_code(capsys):
    out = _json(capsys, ["search", "4", "3"])
    assert (out["status"], out["best_value"], out["rows"]) == ("optimal", 15, 65)
    out = _json(capsys, ["search", "5", "2", "--node-limit", "1", "--time-limit", "5"], code=4)
    assert out["status"] == "feasible_aborted"
    assert out["best_value"] <= out["upper_bound"] == 3255


def test_fixture(tmp_path, capsys):
    out = _json(capsys, ["fixture", "155", "-o", str(tmp_path / "f.code")])
    assert (out["size"], out["min_distance"]) == (155, 4)


def test_text_output_and_console_script():
    proc = subprocess.run([sys.executable, "-m", "flagcodes.cli", "bound", "6", "8", "2"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.startswith("21")
    proc = subprocess.run([sys.executable, "-m", "flagcodes.cli", "bound", "4", "2", "6"],
                          capture_output=True, text=True)
    assert proc.returncode == 2 and "error" in proc.stderr
