import pytest

from pi_forge.constants import derive_constant_set
from pi_forge.mpcore import PrecisionContext

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def ctx100():
    return PrecisionContext(100)


@pytest.fixture(scope="session")
def ctx500():
    return PrecisionContext(500)


@pytest.fixture(scope="session")
def constants500(ctx500):
    return derive_constant_set(ctx500)


@pytest.fixture(scope="session")
def constants100(ctx100):
    return derive_constant_set(ctx100)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
