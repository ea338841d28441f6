import pytest
from hypothesis import settings

from fusionk import SU2Backend, SUNBackend, TrivialBackend, U1Backend

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(scope="session")
def su2():
    return SU2Backend()


@pytest.fixture(scope="session")
def su3():
    return SUNBackend(3)


@pytest.fixture(scope="session")
def u1():
    return U1Backend()


@pytest.fixture
def trivial():
    return TrivialBackend


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
