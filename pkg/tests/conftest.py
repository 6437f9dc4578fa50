import sys

import pytest

from ruledslant.frenet import ruled_apparatus
from ruledslant.surfbase import from_curvatures
from ruledslant.workbench import builtin


@pytest.fixture(scope="session")
def ex61():
    return builtin("example-6-1")


@pytest.fixture(scope="session")
def ex62():
    return builtin("example-6-2")


@pytest.fixture(scope="session")
def ff61(ex61):
    return ruled_apparatus(ex61)


@pytest.fixture(scope="session")
def ff62(ex62):
    return ruled_apparatus(ex62)


@pytest.fixture(scope="session")
def const_spec():
    return from_curvatures("2", "1", "0", (0.0, 3.0), 2000)


@pytest.fixture(scope="session")
def ff_const(const_spec):
    return ruled_apparatus(const_spec)


@pytest.fixture(scope="session")
def thm42_spec():
    return builtin("thm-4-2")


@pytest.fixture(scope="session")
def ff_thm42(thm42_spec):
    return ruled_apparatus(thm42_spec)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
