import random

import pytest

from knalg.algebras import current_bracket
from knalg.geometry import MarkedSphere, parse_rational_function as rf
from knalg.lax import (
    LaxElement,
    LaxError,
    TyurinData,
    from_current,
    is_lax_element,
    lax_bracket,
    lax_product,
    make_lax_element,
    random_lax_element,
    random_tyurin_data,
    to_current,
)

GEOM = MarkedSphere((0, 1))


def _gl2(perturb=False):
    T = TyurinData("gl", 2, ((2, (1, 0)),))
    c21 = "1" if perturb else "0"
    L = LaxElement([[rf("3"), rf("1/(z-2) + 1")], [rf(c21), rf("5")]], T)
    return L, T


def test_rank_one_gl2_element():
    L, T = _gl2()
    assert is_lax_element(L, T, GEOM).valid


def test_eigenvector_violation_is_diagnosed():
    L, T = _gl2(perturb=True)
    diag = is_lax_element(L, T, GEOM)
    assert not diag.valid
    assert any(v["constraint"] == "L_{s,0}α ≠ κα" for v in diag.violations)


def test_pole_outside_allowed_points():
    T = TyurinData("gl", 2, ((2, (1, 0)),))
    L = LaxElement([[rf("1/(z-7)"), rf("0")], [rf("0"), rf("0")]], T)
    assert not is_lax_element(L, T, GEOM).valid


def test_zero_alphas_give_currents():
    T = TyurinData("sl", 2, ((2, (0, 0)), ("I", (0, 0))))
    L = LaxElement([[rf("z + 1/z"), rf("1/(z-1)")], [rf("z^2"), rf("-z - 1/z")]], T)
    assert is_lax_element(L, T, GEOM).valid
    bad = LaxElement([[rf("1/(z-2)"), rf("0")], [rf("0"), rf("-1/(z-2)")]], T)
    assert not is_lax_element(bad, T, GEOM).valid


def test_holomorphic_tail_only():
    T = TyurinData("gl", 2, ((2, (1, 0)),))
    L = make_lax_element(T, GEOM, tail=[[rf("z"), rf("1/z")], [rf("z^2"), rf("0")]])
    assert is_lax_element(L, T, GEOM).valid


def test_rank_one_construction():
    T = TyurinData("gl", 2, ((2, (1, 0)),))
    L = make_lax_element(T, GEOM, {0: {"beta": [0, 1], "kappa": 3, "nu": 1}})
    assert is_lax_element(L, T, GEOM).valid
    with pytest.raises(LaxError):
        make_lax_element(T, GEOM, {0: {"beta": [1, 0], "kappa": 3, "nu": 1}})


def test_so_needs_isotropic_alpha():
    with pytest.raises(LaxError):
        TyurinData("so", 3, ((2, (1, 0, 0)),))
    TyurinData("so", 3, ((2, (1, "I", 0)),))


def test_sp_needs_even_size_and_good_sigma():
    with pytest.raises(LaxError):
        TyurinData("sp", 3, ((2, (1, 0, 0)),))
    with pytest.raises(LaxError):
        TyurinData("sp", 2, ((2, (1, 0)),), sigma=((1, 0), (0, 1)))


def test_tyurin_points_avoid_in_points():
    T = TyurinData("gl", 2, ((1, (1, 0)),))
    with pytest.raises(LaxError):
        make_lax_element(T, GEOM)


def test_tyurin_roundtrip():
    T = random_tyurin_data("sp", 4, GEOM, random.Random(3))
    assert TyurinData.from_dict(T.to_dict()) == T


@pytest.mark.parametrize("kind,size", [("gl", 2), ("sl", 2), ("so", 3), ("sp", 4)])
def test_closure_small(kind, size):
    rng = random.Random(f"closure-{kind}")
    T = random_tyurin_data(kind, size, GEOM, rng)
    for _ in range(3):
        A, B = random_lax_element(T, GEOM, rng), random_lax_element(T, GEOM, rng)
        assert is_lax_element(A, T, GEOM) and is_lax_element(B, T, GEOM)
        assert is_lax_element(lax_bracket(A, B), T, GEOM).valid
    assert all(x.is_zero() for row in lax_bracket(A, A).entries for x in row)


def test_gl_product_closes():
    rng = random.Random(5)
    T = random_tyurin_data("gl", 3, GEOM, rng)
    A, B = random_lax_element(T, GEOM, rng), random_lax_element(T, GEOM, rng)
    assert is_lax_element(lax_product(A, B), T, GEOM).valid


def test_degeneration_matches_current_bracket():
    rng = random.Random(9)
    T = random_tyurin_data("so", 3, GEOM, rng).with_zero_alphas()
    A, B = random_lax_element(T, GEOM, rng), random_lax_element(T, GEOM, rng)
    lie = T.lie
    cb = from_current(current_bracket(to_current(A), to_current(B), lie), lie, T)
    assert cb.entries == lax_bracket(A, B).entries


def test_shape_is_checked():
    T = TyurinData("gl", 2, ((2, (1, 0)),))
    with pytest.raises(LaxError):
        LaxElement([[rf("1")]], T)
