from __future__ import annotations

import os
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from hpqkit.exact import BiPoly, GaussRational, RatMatrix

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=300, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

I = GaussRational(0, 1)

# lines printed at the end of the run by the acceptance module
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def exact_unitaries(n: int) -> dict[str, RatMatrix]:
    """Coordinate swap, a diagonal phase and the 3-4-5 rotation, padded with 1s."""

    def pad(block):
        m = [[GaussRational(int(i == j)) for j in range(n)] for i in range(n)]
        for i, row in enumerate(block):
            for j, v in enumerate(row):
                m[i][j] = GaussRational.coerce(v)
        return RatMatrix(m)

    if n == 1:
        return {"phase": pad([[I]])}
    f = Fraction
    return {
        "swap": pad([[0, 1], [1, 0]]),
        "phase": pad([[I, 0], [0, 1]]),
        "rot345": pad([[f(3, 5), f(4, 5)], [f(-4, 5), f(3, 5)]]),
    }


SPHERE_POINTS = {
    "e1": lambda n: [1] + [0] * (n - 1),
    "345": lambda n: [Fraction(3, 5), Fraction(4, 5)] + [0] * (n - 2),
    "gauss": lambda n: [GaussRational(Fraction(1, 3), Fraction(2, 3)), Fraction(2, 3)] + [0] * (n - 2),
}


def sphere_points(n: int) -> list[list]:
    return [make(n) for name, make in SPHERE_POINTS.items() if n >= 2 or name == "e1"]


small_fracs = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
gauss = st.builds(GaussRational, small_fracs, small_fracs)
nonzero_gauss = gauss.filter(bool)


@st.composite
def bipolys(draw, n: int | None = None, maxdeg: int = 3, max_terms: int = 4):
    n = n if n is not None else draw(st.integers(1, 3))
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        key = tuple(draw(st.lists(st.integers(0, maxdeg), min_size=2 * n, max_size=2 * n)))
        if sum(key) <= maxdeg:
            terms[key] = draw(gauss)
    return BiPoly(n, terms)


@pytest.fixture
def unitaries():
    return exact_unitaries
