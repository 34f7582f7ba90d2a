import math

import pytest

from fractree.samples import FOUR_LEAF, FULL_BINARY, GOLDEN, TERNARY, random_specs, regression_specs

PHI = (1 + math.sqrt(5)) / 2
# largest root of z^3 - 3z - 1
FOUR_LEAF_RHO = 2 * math.cos(math.pi / 9)


@pytest.fixture
def golden():
    return GOLDEN


@pytest.fixture
def full_binary():
    return FULL_BINARY


@pytest.fixture
def four_leaf():
    return FOUR_LEAF


@pytest.fixture
def ternary():
    return TERNARY


@pytest.fixture(scope="session")
def random_corpus():
    return random_specs(100, seed=7)


@pytest.fixture(scope="session")
def regression_set():
    return regression_specs()


_ACCEPTANCE: dict = {}
ACCEPTANCE_CRITERIA = 9


@pytest.fixture
def report():
    """Record the outcome of one acceptance criterion for the summary table."""

    def record(number, passed, detail=""):
        _ACCEPTANCE[number] = (bool(passed), detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in range(1, ACCEPTANCE_CRITERIA + 1):
        passed, detail = _ACCEPTANCE.get(number, (False, "not run or raised"))
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
