from __future__ import annotations

import pathlib
import subprocess
import sys

import pytest

DEMOS = pathlib.Path(__file__).resolve().parent.parent / "demos"


@pytest.mark.parametrize("script,args", [("loop_5_3_walkthrough.py", []), ("ab_sweep.py", ["4"])])
def test_demo_runs(script, args):
    proc = subprocess.run([sys.executable, str(DEMOS / script), *args], capture_output=True, text=True, check=False)
    assert proc.returncode == 0, proc.stderr
    assert "True" in proc.stdout or "all match" in proc.stdout
