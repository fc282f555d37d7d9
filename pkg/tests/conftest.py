import os
import sys

import pytest

# make the shared oracle helpers importable regardless of pytest import mode
sys.path.insert(0, os.path.dirname(__file__))

# one line per acceptance criterion, filled by test_acceptance and printed
# after the run so the pass/fail report survives output capturing
ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_report():
    """Record one pass/fail line for a criterion, then enforce it."""

    def gate(number: str, name: str, ok: bool, detail: str):
        status = "PASS" if ok else "FAIL"
        ACCEPTANCE_LINES.append(f"criterion {number}  {status}  {name}: {detail}")
        assert ok, f"criterion {number} ({name}): {detail}"

    return gate


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
