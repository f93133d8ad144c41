import random

import pytest

from knalg.exactnum import HalfInteger
from knalg.forms import FormSum, WeightError, form, form_bracket, form_product, lie_derivative, order_at_infinity, poisson_defects
from knalg.knbasis import basis_form, random_form


def test_product_adds_weights():
    assert form_product(form(1, "z"), form(1, "z^2")) == form(2, "z^3")
    assert form_product(form(0, "1/z"), form(0, "z")) == form(0, "1")


def test_classical_functions_multiply_as_monomials(sphere1):
    for n in range(-3, 4):
        for m in range(-3, 4):
            assert form_product(basis_form(0, n, 1, sphere1), basis_form(0, m, 1, sphere1)) == basis_form(0, n + m, 1, sphere1)


def test_witt_bracket():
    for n in range(-3, 4):
        for m in range(-3, 4):
            got = form_bracket(form(-1, f"z^{n + 1}"), form(-1, f"z^{m + 1}"))
            assert got == form(-1, f"z^{n + m + 1}").scale(m - n)


def test_bracket_antisymmetric_on_diagonal():
    s = form(HalfInteger("1/2"), "(z^2+1)/(z-3)")
    assert form_bracket(s, s).is_zero()


def test_bracket_with_function_is_lie_derivative():
    e, g = form(-1, "z^2"), form(0, "z")
    assert form_bracket(e, g) == lie_derivative(e, g) == form(0, "z^2")


def test_lie_derivative_examples():
    for m in range(-3, 4):
        assert lie_derivative(form(-1, "z"), form(0, f"z^{m}")) == form(0, f"z^{m}").scale(m)
    assert lie_derivative(form(-1, "z^3+1/z"), form(0, "1")).is_zero()
    # e_n . f^λ_m = (m + nλ) f^λ_{n+m} classically
    lam = HalfInteger(2)
    for n in range(-2, 3):
        for m in range(-2, 3):
            got = lie_derivative(form(-1, f"z^{n + 1}"), form(lam, f"z^{m - 2}"))
            assert got == form(lam, f"z^{n + m - 2}").scale(m + n * 2)


def test_weight_mismatch():
    with pytest.raises(WeightError):
        form(0, "z") + form(1, "z")


def test_order_at_infinity():
    assert order_at_infinity(form(-1, "z^2")) == 0
    assert order_at_infinity(form(1, "1/z^2")) == 0


def test_poisson_on_basis_triples(sphere1):
    els = [basis_form(w, n, 1, sphere1) for w in (-1, 0, 1) for n in (-1, 0, 2)]
    for a in els[:5]:
        for b in els[3:]:
            for c in els[::2]:
                jac, leib = poisson_defects(a, b, c)
                assert jac.is_zero() and leib.is_zero()


def test_poisson_diagonal():
    a = form(HalfInteger("-1/2"), "z^2 + 1/(z-1)")
    jac, leib = poisson_defects(a, a, a)
    assert jac.is_zero() and leib.is_zero()


def test_poisson_random_sums(sphere2):
    rng = random.Random(11)
    for _ in range(10):
        a, b, c = (FormSum([random_form(w, sphere2, rng, -2, 2, 2) for w in rng.sample([-1, HalfInteger("-1/2"), 0, 1], 2)])
                   for _ in range(3))
        jac, leib = poisson_defects(a, b, c)
        assert jac.is_zero() and leib.is_zero()
