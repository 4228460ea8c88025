import json
from pathlib import Path

import pytest

from qmorse.physchem import builtin_registry

GOLDEN = json.loads((Path(__file__).parent / "golden" / "golden.json").read_text())

_acceptance_lines: list[str] = []


@pytest.fixture(scope="session")
def registry():
    return builtin_registry()


@pytest.fixture(scope="session")
def golden():
    return GOLDEN


@pytest.fixture
def report():
    """Record one acceptance verdict line; printed in the terminal summary."""

    def _report(criterion: str, ok: bool, detail: str = "") -> None:
        _acceptance_lines.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}" + (f": {detail}" if detail else ""))

    return _report


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
