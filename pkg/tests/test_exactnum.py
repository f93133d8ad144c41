from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from knalg.exactnum import GaussianRational, HalfInteger, I, ONE, ZERO, as_gaussian, gr_add, gr_div, gr_mul

rationals = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 1000)
gaussians = st.builds(GaussianRational, rationals, rationals)


def test_rational_addition():
    assert gr_add(as_gaussian("1/2"), as_gaussian("1/3")) == as_gaussian("5/6")


def test_i_squared():
    assert gr_mul(I, I) == -ONE


def test_division_by_conjugate():
    q = gr_div(GaussianRational(1, 1), GaussianRational(1, -1))
    assert q == I
    assert q * GaussianRational(1, -1) == GaussianRational(1, 1)


def test_division_by_zero_raises():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


@pytest.mark.parametrize("text,re,im", [("3", 3, 0), ("-1/2+3*I", Fraction(-1, 2), 3), ("2-I", 2, -1), ("I", 0, 1)])
def test_parse(text, re, im):
    assert as_gaussian(text) == GaussianRational(re, im)


def test_str_roundtrip():
    for z in (GaussianRational(Fraction(-7, 3), 2), I, -I, ZERO, GaussianRational(0, Fraction(1, 5))):
        assert as_gaussian(str(z)) == z


@given(gaussians, gaussians, gaussians)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if b:
        assert (a / b) * b == a


def test_half_integers():
    h = HalfInteger("-1/2")
    assert h.twice == -1 and not h.is_integer
    assert h + HalfInteger("1/2") == 0
    assert 1 - h == HalfInteger("3/2")
    with pytest.raises(ValueError):
        HalfInteger("1/3")
