import pytest
from hypothesis import settings

from qtheta.numerics import make_context

settings.register_profile("qtheta", max_examples=30, deadline=None, derandomize=True)
settings.load_profile("qtheta")


@pytest.fixture(scope="session")
def ctx():
    return make_context(60)


@pytest.fixture(scope="session")
def ctx40():
    return make_context(40)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
