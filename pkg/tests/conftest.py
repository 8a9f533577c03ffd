import pytest

from nestedpart.partition import PartitionType, enumerate_endomorphisms

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def p22():
    return enumerate_endomorphisms(PartitionType((2, 2)))


@pytest.fixture(scope="session")
def t22():
    return PartitionType((2, 2))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
