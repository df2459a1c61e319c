"""Shared test fixtures, plus the end-of-run acceptance summary."""

import pytest

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion_report():
    """Record one pass/fail line per acceptance criterion.

    Lines are printed immediately (visible with -s) and replayed in a
    dedicated section of the terminal summary so the plain ``pytest -v``
    output always carries one line per criterion.
    """

    def record(line: str) -> None:
        _ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
