from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"

# criterion number -> (description, passed, detail); filled by test_acceptance
ACCEPTANCE: dict = {}


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def fixture_graphs():
    return sorted(FIXTURES.glob("*.mtx"))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        desc, ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {n:2d}. {desc}: {detail}")
