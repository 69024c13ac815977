"""The nine acceptance criteria at their stated tolerances.

Each test prints one PASS/FAIL line (also collected into the terminal
summary) and fails when any of its checks misses its tolerance.
"""

import pytest

from varhbar import reproduce

from .conftest import ACCEPTANCE_LINES

TITLES = {
    1: "calibration table",
    2: "supported-field damping rate",
    3: "Newtonian binary",
    4: "dominant-path binary (ell = 2.65e8 m)",
    5: "gravitational-wave period decay",
    6: "galaxy rotation curves",
    7: "cosmological constant and zero radius",
    8: "local position invariance parameter",
    9: "property suite",
}


@pytest.mark.parametrize("k", sorted(reproduce.CRITERIA))
def test_criterion(k):
    rows = reproduce.run_all(only={k})[k]
    assert {c.name for c in rows} <= reproduce.CHECK_NAMES
    failed = [c for c in rows if not c.passed]
    ok = reproduce.criterion_passed(rows)
    line = f"criterion {k} ({TITLES[k]}): {'PASS' if ok else 'FAIL'}"
    if not ok:
        line += " | " + "; ".join(f"{c.name}={c.value:.6g} (target {c.target:.6g}, tol {c.tol:g})" for c in failed)
    print(line)
    ACCEPTANCE_LINES.append(line)
    for c in rows:
        print("   " + c.line())
    assert ok, line
