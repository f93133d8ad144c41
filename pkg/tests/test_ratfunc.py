import math

from hypothesis import given, settings, strategies as st

from knalg.exactnum import GaussianRational, ZERO, as_gaussian
from knalg.geometry import parse_rational_function as rf
from knalg.ratfunc import INF, derivative, local_expansion, order_at, residue_at, schwarzian_derivative


def test_orders():
    assert order_at(rf("z^2/(z-1)"), 0) == 2
    assert order_at(rf("1/(z-1)"), 1) == -1
    assert order_at(rf("z^3+1"), INF) == -3
    assert order_at(rf("0"), 0) is math.inf


def test_local_expansions():
    s = local_expansion(rf("1/(1-z)"), 0, 2)
    assert [s[k] for k in range(3)] == [1, 1, 1]
    assert local_expansion(rf("z"), INF, 0).coeffs == {-1: 1}
    s = local_expansion(rf("1/(z-2)"), 2, -1)
    assert s.coeffs == {-1: 1}


def test_residues():
    assert residue_at(rf("1/z"), 0) == 1
    f = rf("1/(z*(z-1))")
    assert (residue_at(f, 0), residue_at(f, 1), residue_at(f, INF)) == (-1, 1, 0)
    assert residue_at(rf("z"), as_gaussian("3+I")) == 0


def test_residue_at_infinity_of_polynomial_tail():
    assert residue_at(rf("1/z + z^2"), INF) == -1


def test_derivatives():
    assert derivative(rf("z^3")) == rf("3*z^2")
    assert derivative(rf("1/z")) == rf("-1/z^2")
    assert derivative(rf("z/(z-1)")) == rf("-1/(z-1)^2")


def test_schwarzian():
    assert schwarzian_derivative(rf("1/z")).is_zero()
    assert schwarzian_derivative(rf("z")).is_zero()
    assert schwarzian_derivative(rf("z^2")) == rf("-3/(2*z^2)")


def test_normal_form_is_canonical():
    assert rf("(z^2-1)/(z-1)") == rf("z+1")
    assert hash(rf("(z^2-1)/(z-1)")) == hash(rf("z+1"))


small = st.integers(-3, 3)
points = st.sampled_from([0, 1, -1, 2, GaussianRational(0, 1), GaussianRational(1, -2)])


@st.composite
def rational_functions(draw):
    num = sum((rf(f"({draw(small)})*z^{k}") for k in range(draw(st.integers(0, 3)) + 1)), rf("0"))
    den = rf("1")
    for _ in range(draw(st.integers(0, 3))):
        den = den * (rf("z") - rf(str(draw(points))))
    return num / den


@settings(max_examples=60, deadline=None)
@given(rational_functions())
def test_residue_theorem(f):
    poles = {p for p in [0, 1, -1, 2, GaussianRational(0, 1), GaussianRational(1, -2)]}
    total = sum((residue_at(f, p) for p in poles), ZERO) + residue_at(f, INF)
    assert total == 0


@settings(max_examples=60, deadline=None)
@given(rational_functions(), rational_functions())
def test_leibniz_rule(f, g):
    assert derivative(f * g) == derivative(f) * g + f * derivative(g)


@settings(max_examples=40, deadline=None)
@given(rational_functions(), points)
def test_expansion_matches_order(f, p):
    o = order_at(f, p)
    if o is math.inf:
        return
    s = local_expansion(f, p, o + 2)
    assert s.valuation() == o
