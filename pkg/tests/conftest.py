from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

# criterion number -> list of (test name, passed, note)
_CRITERIA: dict[int, list[tuple[str, bool, str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k): acceptance criterion number k")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    k = mark.args[0]
    if rep.when == "call":
        if hasattr(rep, "wasxfail"):
            # an expected failure still means the criterion is not met
            _CRITERIA.setdefault(k, []).append((item.name, False, f"expected failure: {rep.wasxfail}"))
        else:
            _CRITERIA.setdefault(k, []).append((item.name, rep.passed, ""))
    elif rep.when == "setup" and rep.skipped:
        _CRITERIA.setdefault(k, []).append((item.name, False, "skipped"))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        entries = _CRITERIA[k]
        ok = all(p for _, p, _ in entries)
        notes = "; ".join(f"{name}: {note}" for name, p, note in entries if not p and note)
        failed = [name for name, p, note in entries if not p and not note]
        detail = notes or ", ".join(failed)
        tr.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}" + (f"  ({detail})" if detail else ""))
