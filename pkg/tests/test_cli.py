from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from curvemirror import cli


def run(*argv: str) -> tuple[int, str]:
    buf = io.StringIO()
    code = cli.main(list(argv), stdout=buf)
    return code, buf.getvalue()


def test_analyze_json():
    code, out = run("analyze", "loop:5,3", "--index", "2", "--json")
    assert code == 0
    assert json.loads(out)["tilting_length"] == 9
    assert '"tilting_length": 9' in out


def test_analyze_text_examples():
    code, out = run("analyze", "bp:2,2", "--index", "1")
    assert code == 0 and "free part 0" in out
    code, out = run("analyze", "chain:3,3")
    assert code == 0 and "milnor number   7" in out


def test_analyze_matrix_input():
    code, out = run("analyze", "[[3,1],[1,3]]", "--json")
    assert code == 0 and json.loads(out)["tilting_length"] == 9


def test_exit_codes():
    assert run("analyze", "loop:5,3", "--index", "3")[0] == 3
    assert run("analyze", "[[1,1],[1,1]]")[0] == 3
    assert run("analyze", "cusp:2,3")[0] == 2
    assert run("analyze", "loop:5")[0] == 2
    assert run("frobnicate")[0] == 2


def test_verify_and_negative_control():
    assert run("verify", "loop:3,3", "--index", "2")[0] == 0
    code, out = run("verify", "loop:3,3", "--index", "2", "--corrupt", "demo")
    assert code == 1 and "FAIL" in out


def test_compare_json():
    code, out = run("compare", "loop:5,3", "--index", "2", "--json")
    data = json.loads(out)
    assert code == 0 and data["ok"] and len(data["pairs"]) == 81


def test_compare_reduction():
    code, out = run("compare", "chain:2,5", "--index", "2")
    assert code == 0 and "loop(2,3;1)" in out


def test_dot_deterministic(tmp_path):
    first, second = tmp_path / "a.dot", tmp_path / "b.dot"
    assert run("compare", "bp:4,4", "--index", "2", "--dot", str(first))[0] == 0
    assert run("compare", "bp:4,4", "--index", "2", "--dot", str(second))[0] == 0
    assert first.read_bytes() == second.read_bytes()
    assert first.read_text().startswith("graph") or first.read_text().startswith("digraph")


def test_export_formats():
    code, out = run("export", "loop:3,3", "--index", "2", "--format", "dot")
    assert code == 0 and out.startswith("digraph")
    code, out = run("export", "loop:3,3", "--index", "2", "--format", "json")
    assert code == 0 and len(json.loads(out)["vertices"]) == 6


def test_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("index = 2\njson = true\n")
    code, out = run("--config", str(cfg), "analyze", "loop:5,3")
    assert code == 0 and json.loads(out)["tilting_length"] == 9
    cfg.write_text("index = two\n")
    assert run("--config", str(cfg), "analyze", "loop:5,3")[0] == 2
    cfg.write_text("colour = blue\n")
    assert run("--config", str(cfg), "analyze", "loop:5,3")[0] == 2


def test_config_roundtrip():
    c = cli.RunConfig(command="compare", family="bp:4,4", index=2, json=True, dot="x.dot")
    assert cli.RunConfig.from_text(c.to_text()) == c


def test_grid_small():
    code, out = run("grid", "--max", "4", "--json")
    data = json.loads(out)
    assert code == 0 and data["ok"]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "curvemirror", "analyze", "loop:3,3", "--json"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["tilting_length"] == 9


@pytest.mark.parametrize("argv", [("analyze", "loop:5,3", "--index", "2"), ("compare", "loop:3,3", "--index", "2", "--json")])
def test_byte_identical(argv):
    assert run(*argv) == run(*argv)
