import itertools
import json
import random

import pytest

from knalg.algebras import (
    AlgebraError,
    CurrentElement,
    D1Element,
    SuperElement,
    builtin_lie_algebra,
    current_bracket,
    current_jacobi_defect,
    d1_bracket,
    d1_jacobi_defect,
    homogeneous_basis,
    jordan_product,
    load_lie_algebra,
    lie_algebra_from_dict,
    super_bracket,
    super_jacobi_defect,
)
from knalg.exactnum import HalfInteger
from knalg.forms import MeromorphicForm, form, form_bracket, form_product
from knalg.knbasis import basis_form, expand_in_basis, random_form

MH = HalfInteger("-1/2")
Z0, Z1 = MeromorphicForm.zero(0), MeromorphicForm.zero(-1)


def test_d1_functions_commute():
    assert d1_bracket(D1Element(form(0, "z"), Z1), D1Element(form(0, "1/z^2"), Z1)).is_zero()


def test_d1_embeds_vector_fields():
    e, f = form(-1, "z^2"), form(-1, "z^-1")
    assert d1_bracket(D1Element(Z0, e), D1Element(Z0, f)) == D1Element(Z0, form_bracket(e, f))


def test_d1_mixed(sphere1):
    for n, m in itertools.product(range(-2, 3), repeat=2):
        got = d1_bracket(D1Element(Z0, basis_form(-1, n, 1, sphere1)), D1Element(basis_form(0, m, 1, sphere1), Z1))
        assert got == D1Element(basis_form(0, n + m, 1, sphere1).scale(m), Z1)


def test_d1_jacobi(sphere2):
    rng = random.Random(4)
    for _ in range(10):
        a, b, c = (D1Element(random_form(0, sphere2, rng), random_form(-1, sphere2, rng)) for _ in range(3))
        assert d1_jacobi_defect(a, b, c).is_zero()


def test_super_odd_pair_is_symmetric_product():
    phi, psi = form(MH, "z^2"), form(MH, "1/(z-1)")
    ab = super_bracket(SuperElement.odd(phi), SuperElement.odd(psi))
    assert ab == super_bracket(SuperElement.odd(psi), SuperElement.odd(phi))
    assert ab.even_part == form_product(phi, psi) and ab.even_part.weight == -1


def test_super_even_diagonal():
    e = SuperElement.even(form(-1, "z^3+2"))
    assert super_bracket(e, e).is_zero()


def test_super_action_classical():
    for k in range(-3, 4):
        got = super_bracket(SuperElement.even(form(-1, "z")), SuperElement.odd(form(MH, f"z^{k}")))
        assert got.odd_part == form(MH, f"z^{k}").scale(HalfInteger(k) - HalfInteger("1/2"))


def test_parity():
    assert SuperElement.odd(form(MH, "z")).parity == 1
    with pytest.raises(AlgebraError):
        (SuperElement.odd(form(MH, "z")) + SuperElement.even(form(-1, "z"))).parity


def test_super_jacobi_random_k2(sphere2):
    rng = random.Random(8)
    for _ in range(15):
        els = [SuperElement.even(random_form(-1, sphere2, rng)) if rng.random() < 0.5
               else SuperElement.odd(random_form(MH, sphere2, rng)) for _ in range(3)]
        assert super_jacobi_defect(*els).is_zero()


def test_jordan():
    f, g = form(0, "z"), form(0, "z^2+1")
    assert jordan_product(f, g).even_part == form_product(f, g)
    phi, psi = form(MH, "z"), form(MH, "1/z")
    assert jordan_product(phi, psi).even_part == form_bracket(phi, psi)
    assert jordan_product(f, phi).odd_part == form(MH, "z^2")
    assert jordan_product(f, phi, antialgebra=True).odd_part == form(MH, "z^2/2")


@pytest.mark.parametrize("name,dim", [("sl2", 3), ("gl2", 4), ("sl3", 8), ("so3", 3), ("so4", 6), ("sp4", 10), ("abelian2", 2)])
def test_builtin_lie_algebras(name, dim):
    g = builtin_lie_algebra(name)
    assert g.dimension == dim
    assert g.validation_errors() == []


def test_unknown_algebra():
    with pytest.raises(AlgebraError):
        builtin_lie_algebra("e8")


def test_lie_algebra_json_roundtrip(tmp_path):
    g = builtin_lie_algebra("sl2")
    p = tmp_path / "sl2.json"
    p.write_text(json.dumps(g.to_dict()))
    h = load_lie_algebra(str(p))
    assert h.structure_constants == g.structure_constants and h.beta == g.beta


def test_bad_lie_algebra_rejected():
    d = builtin_lie_algebra("sl2").to_dict()
    d["beta"] = [["1", "0", "0"], ["0", "0", "0"], ["0", "0", "0"]]
    with pytest.raises(AlgebraError):
        lie_algebra_from_dict(d)


def test_current_brackets(sphere1):
    ab = builtin_lie_algebra("abelian2")
    x = CurrentElement({0: form(0, "z")})
    y = CurrentElement({1: form(0, "z^2")})
    assert current_bracket(x, y, ab).is_zero()
    sl2 = builtin_lie_algebra("sl2")
    e, f, h = 0, 1, 2
    for n, m in itertools.product(range(-2, 3), repeat=2):
        got = current_bracket(CurrentElement({e: basis_form(0, n, 1, sphere1)}),
                              CurrentElement({f: basis_form(0, m, 1, sphere1)}), sl2)
        assert got == CurrentElement({h: basis_form(0, n + m, 1, sphere1)})


def test_current_k2_leading_degree(sphere2):
    sl2 = builtin_lie_algebra("sl2")
    for n, m in itertools.product(range(-2, 3), repeat=2):
        got = current_bracket(CurrentElement({0: basis_form(0, n, 1, sphere2)}),
                              CurrentElement({1: basis_form(0, m, 2, sphere2)}), sl2)
        degs = [i.degree for f in got.components.values() for i in expand_in_basis(f, sphere2)]
        assert not degs or min(degs) >= n + m


def test_current_jacobi(sphere2):
    g = builtin_lie_algebra("so3")
    rng = random.Random(1)
    for _ in range(5):
        a, b, c = (CurrentElement({rng.randrange(3): random_form(0, sphere2, rng)}) for _ in range(3))
        assert current_jacobi_defect(a, b, c, g).is_zero()


def test_homogeneous_bases(sphere2):
    assert len(homogeneous_basis("L", 1, sphere2)) == 2
    assert len(homogeneous_basis("D1", 0, sphere2)) == 4
    assert len(homogeneous_basis("S", 0, sphere2)) == 4
    assert len(homogeneous_basis("current", 0, sphere2, builtin_lie_algebra("sl2"))) == 6
