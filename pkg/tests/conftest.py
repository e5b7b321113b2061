from fractions import Fraction

import pytest
from hypothesis import assume, strategies as st

from bounce_escape import CollisionError, Parameters, construct

F = Fraction

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def worked():
    """g = 10, delta = 1: the hand-checked instance."""
    return construct(Parameters(10, 1))


@pytest.fixture(scope="session")
def small():
    """g = 4, delta = 9/10: the N = 2 instance."""
    return construct(Parameters(4, F(9, 10)))


def small_rationals(lo=-50, hi=50, max_den=20):
    return st.builds(F, st.integers(lo, hi), st.integers(1, max_den))


@st.composite
def instances(draw, max_N=10):
    """A constructed (blueprint, profile) for random rational g and delta.

    Parameter pairs whose impact times collide on the circle are rejected.
    """
    g = draw(st.builds(F, st.integers(1, 60), st.integers(1, 6)))
    # delta = g/4 * r with 1/max_N <= r < 1 keeps N small
    r = draw(st.builds(F, st.integers(1, 99), st.just(100)).filter(lambda r: r >= F(1, max_N)))
    try:
        return construct(Parameters(g, g / 4 * r))
    except CollisionError:
        assume(False)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
