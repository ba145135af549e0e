from __future__ import annotations

import pytest

import helpers

# (criterion number, name, passed) tuples filled in by tests/test_acceptance.py.
ACCEPTANCE_RESULTS: list[tuple[int, str, bool]] = []


@pytest.fixture
def case1_cfg():
    return helpers.CASE1_CFG


@pytest.fixture
def case2_cfg():
    return helpers.CASE2_CFG


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, passed in sorted(ACCEPTANCE_RESULTS):
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number} ({name}): {verdict}")
