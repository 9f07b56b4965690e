import pytest

from shockform import mollifier, scenario as sc
from shockform.solution import WeakAsymptoticSolution, tables_for

EPS_SWEEP = (0.1, 0.05, 0.025, 0.0125)


@pytest.fixture(scope="session")
def burgers():
    return sc.burgers_standard()


@pytest.fixture(scope="session")
def expo():
    return sc.exponential_standard()


@pytest.fixture(scope="session")
def B():
    return mollifier.default_table()


@pytest.fixture(scope="session")
def burgers_tables(burgers):
    return tables_for(burgers)


@pytest.fixture(scope="session")
def expo_tables(expo):
    return tables_for(expo)


@pytest.fixture(scope="session")
def burgers_sols(burgers):
    return {e: WeakAsymptoticSolution(burgers, e) for e in EPS_SWEEP}


@pytest.fixture(scope="session")
def expo_sols(expo):
    return {e: WeakAsymptoticSolution(expo, e) for e in EPS_SWEEP}


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
