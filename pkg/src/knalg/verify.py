"""Invariant suites shared by ``knalg verify`` and the test-suite.

Each ``check_*`` function returns a :class:`CheckResult`; parameters default
to the full-size settings, and :func:`run_suites` shrinks them for a quick run.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .algebras import (
    CurrentElement,
    D1Element,
    SuperElement,
    builtin_lie_algebra,
    current_bracket,
    super_jacobi_defect,
)
from .cocycles import (
    CocycleSpec,
    ExtendedElement,
    central_extend,
    cocycle_defect,
    locality_stability,
    super_cocycle_defect,
)
from .exactnum import HalfInteger, as_gaussian
from .fock import FockSpace, FockVector, central_charge
from .forms import MeromorphicForm, poisson_defects
from .geometry import (
    AffineConnection,
    GeometryConfig,
    MarkedSphere,
    ProjectiveConnection,
    classical,
    parse_rational_function,
    separating_cycle,
    unit_cycle,
)
from .knbasis import (
    basis_form,
    degrees_in,
    grading_bounds,
    kn_pairing,
    leading_term_defects,
    random_form,
    structure_constants,
)
from .lax import (
    from_current,
    is_lax_element,
    lax_bracket,
    lax_product,
    random_lax_element,
    random_tyurin_data,
    to_current,
)

__all__ = [
    "CheckResult",
    "GEOMETRIES",
    "check_witt",
    "check_duality",
    "check_virasoro",
    "check_cocycle_conditions",
    "check_locality",
    "check_almost_grading",
    "check_poisson",
    "check_super_jacobi",
    "check_clifford",
    "check_central_charge",
    "check_affine",
    "check_lax_closure",
    "run_suites",
]

HALF = HalfInteger("1/2")
MINUS_HALF = HalfInteger("-1/2")

GEOMETRIES = {
    1: classical(),
    2: MarkedSphere((0, 1)),
    3: MarkedSphere((0, 1, "2+I")),
}


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    data: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed


def _e(n, geom, p=1) -> D1Element:
    return D1Element(MeromorphicForm.zero(0), basis_form(-1, n, p, geom))


def _a(n, geom, p=1) -> D1Element:
    return D1Element(basis_form(0, n, p, geom), MeromorphicForm.zero(-1))


def _d1_sample(geom, lo, hi) -> list:
    pts = range(1, geom.K + 1)
    return [_a(n, geom, p) for n in degrees_in(0, lo, hi) for p in pts] + \
           [_e(n, geom, p) for n in degrees_in(-1, lo, hi) for p in pts]


# ---------------------------------------------------------------------------


def check_witt(N: int = 10) -> CheckResult:
    """Classical vector fields: ``[e_n, e_m] = (m-n) e_{n+m}`` and bounds ``(0, 0)``."""
    geom = classical()
    table = structure_constants(-1, -1, "bracket", (-N, N), geom)
    bad = 0
    for (n, _, m, _), terms in table.entries.items():
        want = {} if m == n else {(n + m, 1): as_gaussian(int(m - n))}
        if terms != want:
            bad += 1
    gb = grading_bounds(table)
    ok = not bad and (gb.lower_shift, gb.upper_shift) == (0, 0)
    return CheckResult("witt", ok, f"{bad} wrong cells, bounds ({gb.lower_shift}, {gb.upper_shift})")


def check_duality(Ks=(1, 2, 3), weights=(-1, MINUS_HALF, 0, HALF, 1, 2), window=(-6, 6)) -> CheckResult:
    bad = total = 0
    lo, hi = window
    for K in Ks:
        geom = GEOMETRIES[K]
        for lam in weights:
            lam = HalfInteger(lam)
            for n, m in itertools.product(degrees_in(lam, lo, hi), repeat=2):
                for p, r in itertools.product(range(1, K + 1), repeat=2):
                    v = kn_pairing(basis_form(lam, n, p, geom), basis_form(1 - lam, -m, r, geom), geom)
                    total += 1
                    if v != (1 if (n, p) == (m, r) else 0):
                        bad += 1
    return CheckResult("duality", not bad, f"{bad} of {total} pairings wrong")


def check_virasoro(N: int = 10) -> CheckResult:
    """``ψ³`` on classical vector fields and the rescaled extension bracket."""
    geom = classical()
    spec = CocycleSpec("psi3", geom)
    bad = 0
    for n, m in itertools.product(range(-N, N + 1), repeat=2):
        v = spec(basis_form(-1, n, 1, geom), basis_form(-1, m, 1, geom))
        if v != (n ** 3 - n if n + m == 0 else 0):
            bad += 1
    sample = [basis_form(-1, n, 1, geom) for n in range(-4, 5)]
    ext = central_extend(spec, sample, rescale=as_gaussian("-1/12"))
    for n, m in itertools.product(range(-N, N + 1), repeat=2):
        got = ext.bracket(ExtendedElement(basis_form(-1, n, 1, geom)), ExtendedElement(basis_form(-1, m, 1, geom)))
        want_base = basis_form(-1, n + m, 1, geom).scale(m - n)
        want_c = as_gaussian(-(n ** 3 - n)) / 12 if n + m == 0 else 0
        if got.base != want_base or got.central != want_c:
            bad += 1
    return CheckResult("virasoro", not bad, f"{bad} mismatches")


def check_cocycle_conditions(Ks=(1, 2), window=(-4, 4), connections=("0",)) -> CheckResult:
    """Coboundary defects on exhaustive basis triples for every cocycle kind."""
    lo, hi = window
    sl2 = builtin_lie_algebra("sl2")
    failures = []
    count = 0
    for K in Ks:
        geom = GEOMETRIES[K]
        d1 = _d1_sample(geom, lo, hi)
        pts = range(1, K + 1)
        for conn in connections:
            rf = parse_rational_function(conn)
            for kind in ("psi1", "psi3", "psi4"):
                spec = CocycleSpec(kind, geom, projective=ProjectiveConnection(rf), affine=AffineConnection(rf))
                for x, y, z in itertools.combinations(d1, 3):
                    count += 1
                    if cocycle_defect(spec, x, y, z):
                        failures.append((kind, K, conn))
                        break
            spec = CocycleSpec("superPhi", geom, projective=ProjectiveConnection(rf))
            even = [SuperElement.even(basis_form(-1, n, p, geom)) for n in degrees_in(-1, lo, hi) for p in pts]
            odd = [SuperElement.odd(basis_form(MINUS_HALF, n, p, geom))
                   for n in degrees_in(MINUS_HALF, lo, hi) for p in pts]
            for e in even:
                for a, b in itertools.combinations_with_replacement(odd, 2):
                    count += 1
                    if super_cocycle_defect(spec, e, a, b):
                        failures.append(("superPhi", K, conn))
                        break
        spec = CocycleSpec("psi2", geom, lie=sl2)
        cur = [CurrentElement({i: basis_form(0, n, p, geom)})
               for i in range(sl2.dimension) for n in degrees_in(0, lo, hi) for p in pts]
        for x, y, z in itertools.combinations(cur, 3):
            count += 1
            if cocycle_defect(spec, x, y, z):
                failures.append(("psi2", K, "0"))
                break
    return CheckResult("cocycle_conditions", not failures, f"{count} triples, failures: {failures}")


def check_locality(window=(-8, 8), growth: int = 4) -> CheckResult:
    """Support windows in total degree.

Over the separating cycle the support must be a stable finite window; over a
single circle it must be bounded from above with a stable upper edge.
"""
    rows = []
    ok = True
    cases = [(GEOMETRIES[1], None), (GEOMETRIES[2], None), (GEOMETRIES[2], 1), (GEOMETRIES[2], 2)]
    for geom, circle in cases:
        cycle = separating_cycle(geom) if circle is None else unit_cycle(geom, circle)
        for kind in ("psi1", "psi3", "psi4", "superPhi"):
            st = locality_stability(CocycleSpec(kind, geom, cycle), window, growth)
            small, big = st["small"], st["grown"]
            if circle is None:
                good = st["stable"]
            else:
                # a single circle only bounds the support from above
                good = (small.bounded_above and big.bounded_above
                        and small.window is not None and big.window is not None
                        and small.window.M2 == big.window.M2)
            ok &= good
            rows.append({
                "K": geom.K, "cycle": list(cycle.multiplicities), "kind": kind,
                "window": None if small.window is None else [small.window.M1, small.window.M2],
                "grown_window": None if big.window is None else [big.window.M1, big.window.M2],
                "stable": st["stable"], "passed": good,
            })
    return CheckResult("locality", ok, f"{len(rows)} scans", {"scans": rows})


def check_almost_grading(Ks=(2, 3), pairs=((-1, -1), (0, 0), (0, -1)), window=(-4, 4), growth: int = 2) -> CheckResult:
    """Lower shift 0, stable upper shift, closed-form leading coefficients.

    Weight pair ``(0, 0)`` uses the associative product, since the Poisson
    bracket of two functions vanishes.
    """
    lo, hi = window
    rows, ok = [], True
    for K in Ks:
        geom = GEOMETRIES[K]
        for lam, nu in pairs:
            op = "product" if (lam, nu) == (0, 0) else "bracket"
            small = structure_constants(lam, nu, op, (lo, hi), geom)
            big = structure_constants(lam, nu, op, (lo - growth, hi + growth), geom)
            b1, b2 = grading_bounds(small), grading_bounds(big)
            defects = len(leading_term_defects(big))
            good = b1.lower_shift == 0 and b1 == b2 and not defects
            ok &= good
            rows.append({"K": K, "weights": [lam, nu], "op": op,
                         "bounds": [b1.lower_shift, b1.upper_shift], "leading_defects": defects})
    return CheckResult("almost_grading", ok, str(rows), {"rows": rows})


def check_poisson(count: int = 200, seed: int = 2024, weights=(-1, MINUS_HALF, 0, 1)) -> CheckResult:
    geom = GEOMETRIES[2]
    rng = random.Random(seed)
    bad = 0
    for _ in range(count):
        a, b, c = (random_form(rng.choice(weights), geom, rng, -2, 2, 2) for _ in range(3))
        jac, leib = poisson_defects(a, b, c)
        if not (jac.is_zero() and leib.is_zero()):
            bad += 1
    return CheckResult("poisson", not bad, f"{bad} of {count} triples defective (seed {seed})")


def check_super_jacobi(Ks=(1, 2), window=(-3, 3)) -> CheckResult:
    lo, hi = window
    bad = total = 0
    for K in Ks:
        geom = GEOMETRIES[K]
        pts = range(1, K + 1)
        els = [SuperElement.even(basis_form(-1, n, p, geom)) for n in degrees_in(-1, lo, hi) for p in pts]
        els += [SuperElement.odd(basis_form(MINUS_HALF, n, p, geom))
                for n in degrees_in(MINUS_HALF, lo, hi) for p in pts]
        for a, b, c in itertools.combinations_with_replacement(els, 3):
            total += 1
            if not super_jacobi_defect(a, b, c).is_zero():
                bad += 1
    return CheckResult("super_jacobi", not bad, f"{bad} of {total} triples defective")


def check_clifford(weights=(0, HALF, 2), window=(-4, 4), K: int = 1, monomial_window=None) -> CheckResult:
    """Canonical anticommutators of wedging and contraction on window monomials."""
    lo, hi = window
    geom = GEOMETRIES[K]
    bad = total = 0
    for lam in weights:
        lam = HalfInteger(lam)
        F = FockSpace(lam, geom)
        mlo, mhi = monomial_window or window
        vecs = [FockVector.basis(m) for m in F.monomials_in_window(mlo, mhi)]
        wedge = {(n, p): basis_form(lam, n, p, geom) for n in degrees_in(lam, lo, hi) for p in range(1, K + 1)}
        contr = {(m, r): basis_form(1 - lam, -m, r, geom) for m in degrees_in(lam, lo, hi) for r in range(1, K + 1)}
        for v in vecs:
            for (n, p), f in wedge.items():
                for (m, r), g in contr.items():
                    total += 1
                    mixed = F.wedge_op(f, F.contraction_op(g, v)) + F.contraction_op(g, F.wedge_op(f, v))
                    if mixed != (v if (n, p) == (m, r) else FockVector()):
                        bad += 1
            for (n, p), (m, r) in itertools.combinations_with_replacement(list(wedge), 2):
                f, h = wedge[(n, p)], wedge[(m, r)]
                if not (F.wedge_op(f, F.wedge_op(h, v)) + F.wedge_op(h, F.wedge_op(f, v))).is_zero():
                    bad += 1
                g, k = contr[(n, p)], contr[(m, r)]
                if not (F.contraction_op(g, F.contraction_op(k, v)) + F.contraction_op(k, F.contraction_op(g, v))).is_zero():
                    bad += 1
                total += 2
    return CheckResult("clifford", not bad, f"{bad} of {total} anticommutators wrong")


def check_central_charge(weights=(0, HALF, 1, 2), N: int = 4) -> CheckResult:
    """``χ(e_n, e_{-n}) - n χ(e_1, e_{-1}) = s (c_λ/12)(n³-n)`` with one global sign."""
    geom = classical()
    signs = set()
    rows = []
    ok = True
    for lam in weights:
        lam = HalfInteger(lam)
        F = FockSpace(lam, geom)
        vac = F.vacuum()
        chi = {n: F.rep_cocycle(_e(n, geom), _e(-n, geom), vac) for n in range(1, N + 1)}
        c = central_charge(lam)
        for n in range(1, N + 1):
            red = chi[n] - chi[1] * n
            want = c * (n ** 3 - n) / 12
            if red == want and want:
                signs.add(1)
            elif red == -want and want:
                signs.add(-1)
            elif red != want:
                ok = False
        rows.append({"lambda": str(lam), "c": str(c), "chi": {n: str(v) for n, v in chi.items()}})
    ok &= len(signs) == 1
    return CheckResult("central_charge", ok, f"signs observed {sorted(signs)}", {"rows": rows})


def check_affine(N: int = 8, extend_window=(-2, 2)) -> CheckResult:
    geom = classical()
    sl2 = builtin_lie_algebra("sl2")
    spec = CocycleSpec("psi2", geom, lie=sl2)
    psi1 = CocycleSpec("psi1", geom)
    bad = 0
    for n, m in itertools.product(range(-N, N + 1), repeat=2):
        z_n, z_m = basis_form(0, n, 1, geom), basis_form(0, m, 1, geom)
        scalar = psi1(z_n, z_m)
        if scalar != (-n if n + m == 0 else 0):
            bad += 1
        for i, j in itertools.product(range(sl2.dimension), repeat=2):
            v = spec(CurrentElement({i: z_n}), CurrentElement({j: z_m}))
            if v != sl2.beta[i][j] * scalar:
                bad += 1
    lo, hi = extend_window
    sample = [CurrentElement({i: basis_form(0, n, 1, geom)}) for i in range(sl2.dimension) for n in range(lo, hi + 1)]
    ext = central_extend(spec, sample)
    for a, b, c in itertools.combinations_with_replacement(sample, 3):
        d = ext.jacobi_defect(ExtendedElement(a), ExtendedElement(b), ExtendedElement(c))
        if not d.base.is_zero() or d.central:
            bad += 1
    return CheckResult("affine", not bad, f"{bad} mismatches")


def check_lax_closure(types=(("gl", 2), ("sl", 2), ("so", 3), ("sp", 4)), pairs: int = 20, seed: int = 7) -> CheckResult:
    """Seeded closure of brackets plus the ``α → 0`` degeneration to currents."""
    geom = GEOMETRIES[2]
    rows, ok = [], True
    for kind, size in types:
        rng = random.Random(f"{seed}-{kind}{size}")
        T = random_tyurin_data(kind, size, geom, rng)
        fails = 0
        for _ in range(pairs):
            A, B = random_lax_element(T, geom, rng), random_lax_element(T, geom, rng)
            if not is_lax_element(lax_bracket(A, B), T, geom):
                fails += 1
            if kind == "gl" and not is_lax_element(lax_product(A, B), T, geom):
                fails += 1
        T0 = T.with_zero_alphas()
        lie = T0.lie
        A, B = random_lax_element(T0, geom, rng), random_lax_element(T0, geom, rng)
        cb = from_current(current_bracket(to_current(A), to_current(B), lie), lie, T0)
        degen = cb.entries == lax_bracket(A, B).entries
        ok &= not fails and degen
        rows.append({"type": f"{kind}{size}", "failures": fails, "degeneration": degen})
    return CheckResult("lax_closure", ok, str(rows), {"rows": rows})


# ---------------------------------------------------------------------------


def run_suites(cfg: GeometryConfig | None = None, window=(-2, 2), seed: int = 7) -> list:
    """Quick versions of every suite: ``[(name, passed, detail), ...]``.

    ``cfg`` adds a duality and grading scan on that geometry.
    """
    lo, hi = (int(window[0]), int(window[1]))
    w = max(1, min(hi, -lo))
    results = [
        check_witt(max(w, 2)),
        check_duality(Ks=(1, 2), window=(-w, w)),
        check_virasoro(max(w, 2)),
        check_cocycle_conditions(Ks=(1,), window=(-w, w)),
        check_locality(window=(-w - 2, w + 2), growth=2),
        check_almost_grading(Ks=(2,), window=(-w, w), growth=1),
        check_poisson(count=10, seed=seed),
        check_super_jacobi(Ks=(1,), window=(-w, w)),
        check_clifford(weights=(0, HALF), window=(-1, 1), monomial_window=(-1, 0)),
        check_central_charge(N=3),
        check_affine(N=w, extend_window=(-1, 1)),
        check_lax_closure(types=(("gl", 2), ("sl", 2)), pairs=2, seed=seed),
    ]
    if cfg is not None and cfg.sphere.K > 1:
        geom = cfg.sphere
        bad = 0
        for lam in (-1, 0, 1):
            for n, m in itertools.product(degrees_in(lam, -w, w), repeat=2):
                for p, r in itertools.product(range(1, geom.K + 1), repeat=2):
                    v = kn_pairing(basis_form(lam, n, p, geom), basis_form(1 - lam, -m, r, geom), geom)
                    bad += v != (1 if (n, p) == (m, r) else 0)
        results.append(CheckResult("duality_config", not bad, f"{bad} pairings wrong"))
    return [(r.name, r.passed, r.detail) for r in results]
