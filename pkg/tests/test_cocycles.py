import itertools
import random

import pytest

from knalg.algebras import CurrentElement, D1Element, SuperElement, builtin_lie_algebra, lie_algebra_from_dict
from knalg.cocycles import (
    CocycleError,
    CocycleSpec,
    ExtendedElement,
    central_extend,
    cocycle_defect,
    integrate_over,
    l_invariance_defect,
    locality_scan,
    psi1,
    psi3,
    psi4,
    super_cocycle_defect,
    super_phi,
)
from knalg.exactnum import HalfInteger, as_gaussian
from knalg.forms import MeromorphicForm, WeightError, form
from knalg.geometry import (
    AffineConnection,
    GeometryError,
    ProjectiveConnection,
    parse_rational_function as rf,
    separating_cycle,
    unit_cycle,
)
from knalg.knbasis import basis_form, random_form
from knalg.ratfunc import INF, residue_at

MH = HalfInteger("-1/2")


def test_integration(sphere1, sphere2):
    assert integrate_over(separating_cycle(sphere1), form(1, "1/z"), sphere1) == 1
    assert integrate_over(separating_cycle(sphere2), form(1, "z^2+1/(z-5)"), sphere2) == 0
    with pytest.raises(WeightError):
        integrate_over(separating_cycle(sphere1), form(0, "1/z"), sphere1)


def test_separating_cycle_is_minus_residue_at_infinity(sphere2):
    rng = random.Random(3)
    C = separating_cycle(sphere2)
    for _ in range(10):
        w = random_form(1, sphere2, rng, terms=4)
        assert integrate_over(C, w, sphere2) == -residue_at(w.rep, INF)


def test_psi1_classical(sphere1):
    C = separating_cycle(sphere1)
    z = lambda n: basis_form(0, n, 1, sphere1)  # noqa: E731
    assert psi1(z(1), z(-1), C, sphere1) == -1
    for n, m in itertools.product(range(-4, 5), repeat=2):
        assert psi1(z(n), z(m), C, sphere1) == (m if n + m == 0 else 0)
    g = form(0, "z^2 + 1/z")
    assert psi1(g, g, C, sphere1) == 0
    assert psi1(form(0, "1"), g, C, sphere1) == 0


def test_psi3_classical(sphere1):
    C = separating_cycle(sphere1)
    e = lambda n: basis_form(-1, n, 1, sphere1)  # noqa: E731
    assert psi3(e(2), e(-2), C, sphere1) == 6
    for n, m in itertools.product(range(-4, 5), repeat=2):
        assert psi3(e(n), e(m), C, sphere1) == (n ** 3 - n if n + m == 0 else 0)
    v = form(-1, "z^3 - 2/z")
    assert psi3(v, v, C, sphere1) == 0


def test_psi4_classical(sphere1):
    C = separating_cycle(sphere1)
    assert psi4(basis_form(-1, 1, 1, sphere1), basis_form(0, -1, 1, sphere1), C, sphere1) == 2
    for n, m in itertools.product(range(-4, 5), repeat=2):
        v = psi4(basis_form(-1, n, 1, sphere1), basis_form(0, m, 1, sphere1), C, sphere1)
        assert v == (n * (n + 1) if n + m == 0 else 0)
    assert psi4(form(-1, "z^4"), form(0, "7"), C, sphere1) == 0


def test_psi2_classical(sphere1):
    sl2 = builtin_lie_algebra("sl2")
    spec = CocycleSpec("psi2", sphere1, lie=sl2)
    for n in range(-4, 5):
        x = CurrentElement({0: basis_form(0, n, 1, sphere1)})
        y = CurrentElement({1: basis_form(0, -n, 1, sphere1)})
        assert spec(x, y) == sl2.beta[0][1] * (-n)
        assert spec(x, CurrentElement({0: basis_form(0, -n, 1, sphere1)})) == 0
    flat = builtin_lie_algebra("abelian1").to_dict()
    flat["beta"] = [["0"]]
    ab = CocycleSpec("psi2", sphere1, lie=lie_algebra_from_dict(flat))
    assert ab(CurrentElement({0: form(0, "z")}), CurrentElement({0: form(0, "1/z")})) == 0


def test_super_phi(sphere1):
    C = separating_cycle(sphere1)
    e, f = basis_form(-1, 2, 1, sphere1), basis_form(-1, -2, 1, sphere1)
    assert super_phi(SuperElement.even(e), SuperElement.even(f), C, sphere1) == psi3(e, f, C, sphere1)
    phi = SuperElement.odd(basis_form(MH, HalfInteger("3/2"), 1, sphere1))
    psi = SuperElement.odd(basis_form(MH, HalfInteger("-3/2"), 1, sphere1))
    assert super_phi(SuperElement.even(e), phi, C, sphere1) == 0
    assert super_phi(phi, psi, C, sphere1) == super_phi(psi, phi, C, sphere1) != 0


def test_connections_are_validated(sphere1):
    with pytest.raises(GeometryError):
        CocycleSpec("psi3", sphere1, projective=ProjectiveConnection(rf("1/z")))
    with pytest.raises(GeometryError):
        CocycleSpec("psi4", sphere1, affine=AffineConnection(rf("1/(z-1)")))
    with pytest.raises(ValueError):
        CocycleSpec("psi9", sphere1)
    with pytest.raises(ValueError):
        CocycleSpec("psi2", sphere1)


def _d1(sphere, lo=-2, hi=2):
    pts = range(1, sphere.K + 1)
    return [D1Element(basis_form(0, n, p, sphere), MeromorphicForm.zero(-1)) for n in range(lo, hi + 1) for p in pts] + \
           [D1Element(MeromorphicForm.zero(0), basis_form(-1, n, p, sphere)) for n in range(lo, hi + 1) for p in pts]


@pytest.mark.parametrize("kind", ["psi1", "psi3", "psi4"])
def test_cocycle_with_nonzero_connections(sphere2, kind):
    spec = CocycleSpec(kind, sphere2, projective=ProjectiveConnection(rf("z^2+3")),
                       affine=AffineConnection(rf("z^2+3")))
    for x, y, z in itertools.combinations(_d1(sphere2), 3):
        assert cocycle_defect(spec, x, y, z) == 0


def test_cocycle_degenerate_triple(sphere1):
    spec = CocycleSpec("psi3", sphere1)
    x, z = form(-1, "z^3"), form(-1, "1/z")
    assert cocycle_defect(spec, x, x, z) == 0


def test_psi4_random_d1_k2(sphere2):
    spec = CocycleSpec("psi4", sphere2, unit_cycle(sphere2, 1), affine=AffineConnection(rf("z+2")))
    rng = random.Random(6)
    for _ in range(10):
        x, y, z = (D1Element(random_form(0, sphere2, rng, terms=2), random_form(-1, sphere2, rng, terms=2))
                   for _ in range(3))
        assert cocycle_defect(spec, x, y, z) == 0


def test_super_cocycle_parities(sphere1):
    spec = CocycleSpec("superPhi", sphere1, projective=ProjectiveConnection(rf("z^2+3")))
    ev = [SuperElement.even(basis_form(-1, n, 1, sphere1)) for n in range(-2, 3)]
    od = [SuperElement.odd(basis_form(MH, HalfInteger(n) + HalfInteger("1/2"), 1, sphere1)) for n in range(-3, 2)]
    for a, b, c in itertools.combinations(ev, 3):
        assert super_cocycle_defect(spec, a, b, c) == 0
    for a in ev:
        for b, c in itertools.combinations_with_replacement(od, 2):
            assert super_cocycle_defect(spec, a, b, c) == 0
    for a, b, c in itertools.combinations_with_replacement(od, 3):
        assert super_cocycle_defect(spec, a, b, c) == 0


def test_l_invariance(sphere1, sphere2):
    spec = CocycleSpec("psi1", sphere1)
    for n in range(-3, 4):
        assert l_invariance_defect(spec, basis_form(-1, 0, 1, sphere1), basis_form(0, n, 1, sphere1),
                                   basis_form(0, -n, 1, sphere1)) == 0
    spec2 = CocycleSpec("psi1", sphere2)
    g = form(0, "z^2 + 1/(z-1)")
    assert l_invariance_defect(spec2, form(-1, "z^3 + 1/z"), g, g) == 0
    assert l_invariance_defect(spec2, MeromorphicForm.zero(-1), g, form(0, "1/z")) == 0


def test_locality_classical(sphere1):
    for kind in ("psi1", "psi3"):
        rep = locality_scan(CocycleSpec(kind, sphere1), (-6, 6))
        assert rep.local and (rep.window.M1, rep.window.M2) == (0, 0)


def test_locality_single_circle_bounded_above(sphere2):
    rep = locality_scan(CocycleSpec("psi3", sphere2, unit_cycle(sphere2, 1)), (-4, 4))
    assert rep.bounded_above and rep.window.M2 == 0


def test_virasoro_extension(sphere1):
    spec = CocycleSpec("psi3", sphere1)
    sample = [basis_form(-1, n, 1, sphere1) for n in range(-3, 4)]
    ext = central_extend(spec, sample, rescale=as_gaussian("-1/12"))
    for n in range(-5, 6):
        b = ext.bracket(ExtendedElement(basis_form(-1, n, 1, sphere1)), ExtendedElement(basis_form(-1, -n, 1, sphere1)))
        assert b.base == basis_form(-1, 0, 1, sphere1).scale(-2 * n)
        assert b.central == as_gaussian(-(n ** 3 - n)) / 12


def test_zero_cocycle_splits(sphere1):
    sample = [basis_form(-1, n, 1, sphere1) for n in range(-2, 3)]
    ext = central_extend(lambda x, y: 0, sample)
    assert all(ext.cocycle(x, y) == 0 for x, y in itertools.product(sample, repeat=2))


def test_affine_extension(sphere1):
    sl2 = builtin_lie_algebra("sl2")
    spec = CocycleSpec("psi2", sphere1, lie=sl2)
    sample = [CurrentElement({i: basis_form(0, n, 1, sphere1)}) for i in range(3) for n in range(-2, 3)]
    ext = central_extend(spec, sample)
    for n in range(-3, 4):
        x = CurrentElement({0: basis_form(0, n, 1, sphere1)})
        y = CurrentElement({1: basis_form(0, -n, 1, sphere1)})
        assert ext.cocycle(x, y) == sl2.beta[0][1] * (-n)


def test_non_cocycle_rejected_with_witness(sphere1):
    e = {n: basis_form(-1, n, 1, sphere1) for n in range(0, 4)}

    def omega(x, y):
        if (x, y) == (e[1], e[2]):
            return as_gaussian(1)
        if (x, y) == (e[2], e[1]):
            return as_gaussian(-1)
        return as_gaussian(0)

    with pytest.raises(CocycleError) as info:
        central_extend(omega, [e[0], e[1], e[2]])
    assert info.value.witness is not None
