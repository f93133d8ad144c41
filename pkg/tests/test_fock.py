import itertools
import random

import pytest

from knalg.algebras import D1Element
from knalg.exactnum import HalfInteger, as_gaussian
from knalg.fock import FockSpace, FockVector, ProbeDependenceError, WedgeMonomial, central_charge
from knalg.forms import MeromorphicForm, form
from knalg.knbasis import basis_form

HALF = HalfInteger("1/2")


def e(n, geom, p=1):
    return D1Element(MeromorphicForm.zero(0), basis_form(-1, n, p, geom))


def test_vacuum(sphere1):
    F = FockSpace(0, sphere1, 0)
    vac = F.vacuum()
    assert vac.prefix == () and F.index(vac.tail_start).degree == 0
    assert F.vacuum(3) != F.vacuum(4)
    G = FockSpace(HALF, sphere1)
    assert G.index(G.vacuum(HalfInteger("5/2")).tail_start).degree == HalfInteger("5/2")


def test_degree_parity_checked(sphere1):
    with pytest.raises(ValueError):
        FockSpace(HALF, sphere1).vacuum(1)


def test_wedge_front_insertion(sphere1):
    F = FockSpace(1, sphere1)
    T = 2
    v = F.vacuum_vector(T)
    got = F.wedge_op(basis_form(1, T - 1, 1, sphere1), v)
    assert got == FockVector.basis(F.monomial([(T - 1, 1)], (T, 1)))
    assert F.wedge_op(basis_form(1, T, 1, sphere1), v).is_zero()
    f = basis_form(1, -3, 1, sphere1)
    assert F.wedge_op(f, F.wedge_op(f, v)).is_zero()


def test_contraction_of_first_slot(sphere1):
    F = FockSpace(0, sphere1)
    T = 1
    got = F.contraction_op(basis_form(1, -T, 1, sphere1), F.vacuum_vector(T))
    assert got == F.vacuum_vector(T + 1)
    assert F.contraction_op(basis_form(1, 3, 1, sphere1), F.vacuum_vector(T)).is_zero()


def test_canonical_anticommutators_random(sphere2):
    rng = random.Random(12)
    for lam in (0, HALF, 2):
        F = FockSpace(lam, sphere2)
        mons = F.monomials_in_window(-1, 1)
        degs = [HalfInteger(d) + (HALF if not HalfInteger(lam).is_integer else 0) for d in range(-2, 2)]
        for _ in range(30):
            v = FockVector.basis(rng.choice(mons))
            n, m = rng.choice(degs), rng.choice(degs)
            p, r = rng.randint(1, 2), rng.randint(1, 2)
            f, g = basis_form(lam, n, p, sphere2), basis_form(1 - HalfInteger(lam), -m, r, sphere2)
            mixed = F.wedge_op(f, F.contraction_op(g, v)) + F.contraction_op(g, F.wedge_op(f, v))
            assert mixed == (v if (n, p) == (m, r) else FockVector())


def test_monomial_validation(sphere1):
    F = FockSpace(0, sphere1)
    with pytest.raises(ValueError):
        F.monomial([(2, 1)], (1, 1))
    with pytest.raises(ValueError):
        F.monomial([(0, 1), (0, 1)], (3, 1))


def test_e0_telescopes(sphere1):
    for lam in (0, HALF, 1, 2):
        F = FockSpace(lam, sphere1)
        base = F.index(F.reference).degree
        x = e(0, sphere1)
        for T in range(-2, 3):
            t = base + T
            vt = F.regularized_action(x, F.vacuum_vector(t))
            vt1 = F.regularized_action(x, F.vacuum_vector(t + 1))
            ev_t = vt.terms.get(F.vacuum(t), 0)
            ev_t1 = vt1.terms.get(F.vacuum(t + 1), 0)
            assert ev_t - ev_t1 == as_gaussian(t.as_rational())


def test_positive_part_annihilates_vacuum(sphere1):
    for lam in (0, HALF, 2):
        F = FockSpace(lam, sphere1)
        for n in range(1, 4):
            assert F.regularized_action(e(n, sphere1), F.vacuum_vector()).is_zero()


def test_reference_vacuum_has_zero_eigenvalue(sphere1):
    F = FockSpace(1, sphere1)
    assert F.regularized_action(e(0, sphere1), F.vacuum_vector()).is_zero()


def test_constant_function_is_scalar(sphere2):
    F = FockSpace(0, sphere2)
    one = D1Element(form(0, "1"), MeromorphicForm.zero(-1))
    for m in F.monomials_in_window(-1, 0):
        out = F.regularized_action(one, FockVector.basis(m))
        assert set(out.terms) <= {m}


def test_rep_cocycle_antisymmetric_and_trivial_cases(sphere1):
    F = FockSpace(2, sphere1)
    vac = F.vacuum()
    assert F.rep_cocycle(e(2, sphere1), e(2, sphere1), vac) == 0
    assert F.rep_cocycle(e(1, sphere1), e(2, sphere1), vac) == 0


@pytest.mark.parametrize("lam,c", [(0, -2), (HALF, 1), (1, -2), (2, -26)])
def test_central_charge(sphere1, lam, c):
    assert central_charge(lam) == c
    F = FockSpace(lam, sphere1)
    vac = F.vacuum()
    chi1 = F.rep_cocycle(e(1, sphere1), e(-1, sphere1), vac)
    for n in range(2, 5):
        red = F.rep_cocycle(e(n, sphere1), e(-n, sphere1), vac) - chi1 * n
        assert red == as_gaussian(c) * (n ** 3 - n) / 12


def test_wedge_monomial_signs():
    m = WedgeMonomial.make((0, 2), 5)
    sign, out = m.insert(1)
    assert sign == -1 and out.prefix == (0, 1, 2)
    assert m.insert(2) is None and m.insert(7) is None
    sign, out = m.remove(2)
    assert sign == -1 and out.prefix == (0,)
    sign, out = m.remove(5)
    assert sign == 1 and out == WedgeMonomial.make((0, 2, 6), 7)
