import pytest

from compcause.experiments import load_system

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def system():
    return load_system()


@pytest.fixture(scope="session")
def primed(system):
    return system.primed()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
