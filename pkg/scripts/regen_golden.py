#!/usr/bin/env python3
"""Regenerate the CLI golden files under tests/golden/."""

import io
import sys
from contextlib import redirect_stdout
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from intdiffops.cli import main  # noqa: E402
from golden_cases import GOLDEN_CASES  # noqa: E402


def run():
    out_dir = ROOT / "tests" / "golden"
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, argv in GOLDEN_CASES:
        buf = io.StringIO()
        with redirect_stdout(buf):
            code = main(list(argv))
        if code != 0:
            raise SystemExit(f"golden case {name} exited with {code}")
        path = out_dir / f"{name}.txt"
        path.write_bytes(buf.getvalue().encode())
        print(f"wrote {path.relative_to(ROOT)}")


if __name__ == "__main__":
    run()
