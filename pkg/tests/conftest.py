from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from botplan.catalog import Catalog, InstanceType, builtin_scenario

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


@pytest.fixture
def table1():
    return builtin_scenario(1)


@pytest.fixture
def table3():
    return builtin_scenario(3)


@pytest.fixture
def table4():
    return builtin_scenario(4)


@st.composite
def catalogs(draw, min_types=1, max_types=4, max_cost=16, max_perf=64, startup=None):
    n = draw(st.integers(min_types, max_types))
    types = []
    for i in range(n):
        cost = draw(st.integers(1, max_cost))
        perf = draw(st.integers(1, max_perf))
        types.append(InstanceType(f"t{i}", Fraction(cost), Fraction(perf)))
    if startup is None:
        startup = draw(st.integers(0, 60))
    return Catalog(tuple(types), Fraction(startup))


@st.composite
def fractional_catalogs(draw, max_types=4):
    n = draw(st.integers(1, max_types))
    money = st.fractions(min_value=Fraction(1, 100), max_value=20, max_denominator=1000)
    secs = st.fractions(min_value=Fraction(1, 10), max_value=100, max_denominator=100)
    types = [InstanceType(f"x{i}", draw(money), draw(secs)) for i in range(n)]
    return Catalog(tuple(types), Fraction(draw(st.integers(0, 30))))


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
