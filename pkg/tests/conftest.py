import random

import pytest

from chainrewrite.algebra.groups import MockSuite, get_suite


@pytest.fixture
def mock():
    return get_suite("mock")


@pytest.fixture
def toy():
    return get_suite("toy")


@pytest.fixture
def small():
    """Mock suite over q=101, small enough for exhaustive loops."""
    return MockSuite(101)


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture(scope="session")
def production():
    return get_suite("production")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
