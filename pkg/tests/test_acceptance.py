"""Every acceptance criterion at its stated tolerance and default settings.

Each test records one PASS/FAIL line, collected in the terminal summary.
"""
import math
import subprocess
import sys
import time
from pathlib import Path

import pytest

from kgwick.acceptance import CRITERIA, FULL, RUNTIME_LIMITS, Suite, run_smoke

ROOT = Path(__file__).resolve().parents[1]
pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def suite():
    return Suite(FULL)


@pytest.mark.parametrize("cid,check", CRITERIA, ids=[f"criterion_{c}" for c, _ in CRITERIA])
def test_criterion(suite, acceptance_log, cid, check):
    t0 = time.perf_counter()
    res = check(suite)
    runtime = time.perf_counter() - t0
    limit = RUNTIME_LIMITS.get(cid, math.inf)
    ok = res.passed and runtime <= limit
    line = res.line(runtime)
    if res.passed and not ok:
        line = line.replace("[PASS]", "[FAIL]") + f" over the {limit:.0f}s limit"
    acceptance_log.append(line)
    print(line)
    print(res.metrics)
    assert runtime <= limit, f"runtime {runtime:.1f}s exceeds {limit}s"
    assert res.passed, f"limits {res.limits}; measured {res.metrics}"


def test_smoke_3d(acceptance_log):
    res, runtime = run_smoke()
    acceptance_log.append(res.line(runtime))
    print(res.metrics)
    assert res.passed, f"limits {res.limits}; measured {res.metrics}"


def test_criterion_14_determinism(tmp_path, acceptance_log):
    blobs = []
    for _ in range(2):
        proc = subprocess.run(
            [sys.executable, "-m", "kgwick.cli", "verify", "--config",
             str(ROOT / "configs" / "quick.ini"), "--out", str(tmp_path), "--threads", "1"],
            capture_output=True, text=True, cwd=ROOT)
        # exit 1 only signals failing criteria inside the replay; anything else is a crash
        assert proc.returncode in (0, 1), proc.stderr
        blobs.append((tmp_path / "summary.json").read_bytes())
    same = blobs[0] == blobs[1]
    acceptance_log.append(f"[{'PASS' if same else 'FAIL'}] criterion 14: determinism "
                          f"(two verify runs, {len(blobs[0])} bytes)")
    assert same
