"""Shared helper: every demo writes into demos/output/ (or the directory given as argv[1])."""

import sys
from pathlib import Path


def out_dir() -> Path:
    d = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parent / "output"
    d.mkdir(parents=True, exist_ok=True)
    return d
