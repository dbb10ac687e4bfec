"""Shared test plumbing: the acceptance-criterion recorder."""

import pytest

_CRITERION_LINES = []


@pytest.fixture()
def criterion():
    """Record one pass/fail line for an acceptance criterion.

    The line is printed immediately, replayed in the terminal summary,
    and the test fails on it when the check did not hold.
    """

    def record(name, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
        _CRITERION_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERION_LINES:
            terminalreporter.write_line(line)
