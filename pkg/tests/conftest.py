from __future__ import annotations

from pathlib import Path

import pytest

from hyperfuzz.catalog import fixture_fields, fixture_spaces

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "hyperfuzz" / "fixtures"

# criterion number -> one-line detail, filled in by test_acceptance.py
ACCEPTANCE_DETAILS: dict[int, str] = {}


@pytest.fixture(scope="session")
def fields():
    return fixture_fields()


@pytest.fixture(scope="session")
def spaces():
    return fixture_spaces()


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    outcomes = {}
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            name = rep.nodeid.rsplit("::", 1)[-1]
            if "test_acceptance.py" in rep.nodeid and name.startswith("test_criterion_"):
                n = int(name.split("_")[2])
                if status != "passed" or rep.when == "call":
                    outcomes[n] = "PASS" if status == "passed" else "FAIL"
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(outcomes):
        detail = ACCEPTANCE_DETAILS.get(n, "")
        terminalreporter.write_line(f"criterion {n}: {outcomes[n]}  {detail}".rstrip())
