import json
from pathlib import Path

import pytest

from almostprime_lab.buchstab import build_omega_table
from almostprime_lab.core_arith import build_prime_table

FIXTURES = Path(__file__).parent / "fixtures"


def load_fixture(name: str) -> dict:
    return json.loads((FIXTURES / name).read_text())


@pytest.fixture(scope="session")
def oracles():
    return load_fixture("oracles.json")


@pytest.fixture(scope="session")
def audit_config():
    return load_fixture("audits.json")


@pytest.fixture(scope="session")
def small_table():
    return build_prime_table(200_000)


@pytest.fixture(scope="session")
def table3m():
    """Covers 3X for X = 10^6."""
    return build_prime_table(3_000_000)


@pytest.fixture(scope="session")
def omega_table():
    return build_omega_table(20.0, 1e-4)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
