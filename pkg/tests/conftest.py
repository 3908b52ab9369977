import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from planeorbit.numfield import NumberField
from planeorbit.planeauto import PlaneAutomorphism, PlanePoint, compose_all
from planeorbit.poly2 import BiPoly

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.large_base_example, HealthCheck.filter_too_much],
)
settings.load_profile("default")

Q = NumberField.rationals()


@pytest.fixture
def Qf():
    return Q


@pytest.fixture
def Q4():
    return NumberField.cyclotomic(4)


@pytest.fixture
def Q3():
    return NumberField.cyclotomic(3)


# --- hypothesis strategies -----------------------------------------------------------

small_ints = st.integers(-4, 4)
nonzero_ints = st.integers(-4, 4).filter(bool)


@st.composite
def rationals(draw, nonzero=False):
    num = draw(nonzero_ints if nonzero else small_ints)
    den = draw(st.integers(1, 3))
    return Q(num) / den


@st.composite
def elements(draw, field, nonzero=False):
    coeffs = [draw(small_ints) for _ in range(field.degree)]
    u = field.from_json([str(c) for c in coeffs])
    if nonzero and not u:
        u = field.one
    return u


@st.composite
def uni_polys(draw, field, min_degree=0, max_degree=3, var="y"):
    """Polynomial in one variable with nonzero top coefficient."""
    deg = draw(st.integers(min_degree, max_degree))
    v = BiPoly.y(field) if var == "y" else BiPoly.x(field)
    out = BiPoly.zero(field)
    for i in range(deg + 1):
        c = draw(elements(field, nonzero=(i == deg)))
        out = out + (v ** i).scale(c)
    return out


@st.composite
def triangulars(draw, field=Q, min_degree=0, max_degree=3):
    a = draw(elements(field, nonzero=True))
    b = draw(elements(field, nonzero=True))
    c = draw(elements(field))
    P = draw(uni_polys(field, min_degree, max_degree))
    return PlaneAutomorphism.triangular(field, a, P, b, c)


@st.composite
def affines(draw, field=Q):
    while True:
        m = [draw(elements(field)) for _ in range(4)]
        if m[0] * m[3] - m[1] * m[2]:
            break
    e = [draw(elements(field)) for _ in range(2)]
    return PlaneAutomorphism.affine(field, *m, *e)


@st.composite
def automorphisms(draw, field=Q, max_letters=3):
    n = draw(st.integers(1, max_letters))
    maps = []
    for _ in range(n):
        maps.append(draw(affines(field)))
        maps.append(draw(triangulars(field, 0, 2)))
    return compose_all(maps)


@st.composite
def points(draw, field=Q):
    return PlanePoint(draw(elements(field)), draw(elements(field)))


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    lines = getattr(acceptance, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
