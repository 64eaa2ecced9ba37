import io
import json
import os
import sys
from contextlib import redirect_stdout
from pathlib import Path

import pytest

from intdiffops.cli import main
from golden_cases import GOLDEN_CASES

GOLDEN_DIR = Path(__file__).parent / "golden"


def run_cli(argv, stdin_text=None):
    buf = io.StringIO()
    old_stdin = sys.stdin
    try:
        if stdin_text is not None:
            sys.stdin = io.StringIO(stdin_text)
        with redirect_stdout(buf):
            code = main(argv)
    finally:
        sys.stdin = old_stdin
    return code, buf.getvalue()


def test_normalize_examples():
    code, out = run_cli(["normalize", "d_1*int_1"])
    assert code == 0 and out == "1\n"
    code, out = run_cli(["normalize", "int_1*d_1"])
    assert code == 0 and out == "1 - e[0,0]_1\n"


def test_dims_example():
    code, out = run_cli(
        ["--window=-5..5", "dims", "--module", "Ms", "--s", "3", "--lambda", "0"]
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert len(lines) == 11
    assert all(line.endswith(": 3") for line in lines)


def test_rep_type_example():
    code, out = run_cli(["rep-type", "--orbit", "Z,Z", "--dset", "1,2"])
    assert code == 0 and out.strip() == "finite"


def test_stdin_batch():
    code, out = run_cli(["normalize"], stdin_text="d_1*int_1\nH_1*d_1\n")
    assert code == 0
    assert out == "1\nH_1*d_1\n"


def test_exit_codes():
    code, _ = run_cli(["normalize", "H_1 +"])
    assert code == 1
    code, _ = run_cli(["--window=-2..2", "dims", "--module", "Ms"])
    assert code == 2
    # block decomposition without offset 0 in the window is a domain error
    code, _ = run_cli(
        ["--window=1..3", "decompose", "--module", "Ms", "--s", "1", "--lambda", "0"]
    )
    assert code == 1


def test_json_error_object():
    code, out = run_cli(["--json", "normalize", "H_1 +"])
    assert code == 1
    doc = json.loads(out)
    assert doc["error"]["kind"] == "domain"
    assert "schema" in doc


def test_field_env_default(monkeypatch):
    monkeypatch.setenv("INTDIFF_FIELD", "qi")
    code, out = run_cli(["normalize", "i*H_1"])
    assert code == 0 and out.strip() == "i*H_1"
    monkeypatch.setenv("INTDIFF_FIELD", "q")
    code, _ = run_cli(["normalize", "i*H_1"])
    assert code == 1


def test_scalars_outside_field_rejected():
    code, _ = run_cli(["normalize", "i*H_1"])
    assert code == 1
    code, _ = run_cli(["--field", "qi", "normalize", "i*H_1"])
    assert code == 0


def test_deterministic_output():
    argv = ["--json", "--window=-2..2", "module-build", "--module", "Ms", "--s", "2", "--lambda", "0"]
    _, out1 = run_cli(argv)
    _, out2 = run_cli(argv)
    assert out1 == out2


def test_parse_print_identity():
    for expr in ["H_1^2*d_1 - 2*int_1", "e[0,0]_1", "1 - e[0,0]_1"]:
        _, out = run_cli(["normalize", expr])
        canonical = out.strip()
        _, out2 = run_cli(["normalize", canonical])
        assert out2.strip() == canonical


@pytest.mark.parametrize("name,argv", GOLDEN_CASES)
def test_golden(name, argv):
    path = GOLDEN_DIR / f"{name}.txt"
    assert path.exists(), f"golden file {path} missing; run scripts/regen_golden.py"
    code, out = run_cli(list(argv))
    assert code == 0
    assert out.encode() == path.read_bytes()
