"""Geometric 2-cocycles, cycle integration, cocycle checks and central extensions.

Integration over a cycle class is a multiplicity-weighted residue sum at the
in-points; the factor ``1/(2πi)`` is absorbed, so every value is exact.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .algebras import (
    CurrentElement,
    D1Element,
    FiniteLieAlgebra,
    SuperElement,
    current_bracket,
    d1_bracket,
    super_bracket,
)
from .exactnum import ZERO, GaussianRational, HalfInteger, as_gaussian
from .forms import MeromorphicForm, WeightError, form_bracket
from .geometry import (
    AffineConnection,
    CycleClass,
    GeometryError,
    MarkedSphere,
    ProjectiveConnection,
    separating_cycle,
    validate_connection,
)
from .knbasis import basis_form, degrees_in
from .ratfunc import ZERO_RF, RationalFunction, local_expansion, order_at, residue_at

__all__ = [
    "KINDS",
    "CocycleError",
    "CocycleSpec",
    "ExtendedElement",
    "CentralExtension",
    "LocalityWindow",
    "LocalityReport",
    "integrate_over",
    "psi1",
    "psi2",
    "psi3",
    "psi4",
    "super_phi",
    "bracket_of",
    "cocycle_defect",
    "super_cocycle_defect",
    "l_invariance_defect",
    "locality_scan",
    "locality_stability",
    "central_extend",
]

KINDS = ("psi1", "psi2", "psi3", "psi4", "superPhi")
MINUS_HALF = HalfInteger("-1/2")


class CocycleError(ValueError):
    """Cocycle condition violated; ``witness`` holds the offending triple."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def _lower_bound(o, k: int):
    """Lower bound for the order of the ``k``-th derivative of a function of order ``o``."""
    if 0 <= o < k:
        return 0
    return o - k


def _residue_of_terms(point, factors) -> GaussianRational:
    """Residue at ``point`` of ``prod f_i^{(k_i)} dz`` for ``factors = [(f_i, k_i)]``."""
    orders = []
    for f, k in factors:
        if f.is_zero():
            return ZERO
        orders.append(_lower_bound(order_at(f, point), k))
    total = sum(orders)
    if total >= 0:
        return ZERO
    series = None
    for (f, k), o in zip(factors, orders):
        through = -1 - (total - o)
        s = local_expansion(f, point, through + k)
        for _ in range(k):
            s = s.derivative()
        series = s if series is None else series * s
    return series.coefficient(-1)


def _cycle_sum(cycle: CycleClass, geom: MarkedSphere, terms) -> GaussianRational:
    """``sum_i mult_i sum_t c_t res_{P_i}(prod factors_t)``."""
    acc = ZERO
    for mult, P in zip(cycle.multiplicities, geom.in_points):
        if not mult:
            continue
        local = ZERO
        for c, factors in terms:
            r = _residue_of_terms(P, factors)
            if r:
                local = local + as_gaussian(c) * r
        if local:
            acc = acc + local * mult
    return acc


def integrate_over(cycle: CycleClass, omega: MeromorphicForm, geom: MarkedSphere) -> GaussianRational:
    """``∮_C ω`` for a 1-form ``ω``, as a weighted residue sum at the in-points."""
    if omega.weight != 1:
        raise WeightError(f"only 1-forms can be integrated, got weight {omega.weight}")
    cycle.check(geom)
    acc = ZERO
    for mult, P in zip(cycle.multiplicities, geom.in_points):
        if mult:
            acc = acc + residue_at(omega.rep, P) * mult
    return acc


def _rep(f: MeromorphicForm, weight, what: str) -> RationalFunction:
    if f.is_zero():
        return ZERO_RF
    if f.weight != weight:
        raise WeightError(f"{what} must have weight {weight}, got {f.weight}")
    return f.rep


def psi1(g, h, cycle: CycleClass, geom: MarkedSphere) -> GaussianRational:
    """``∮ g dh`` for functions ``g``, ``h``."""
    g, h = _rep(g, 0, "g"), _rep(h, 0, "h")
    return _cycle_sum(cycle, geom, [(1, [(g, 0), (h, 1)])])


def psi3(e, f, cycle: CycleClass, geom: MarkedSphere, R: RationalFunction = ZERO_RF) -> GaussianRational:
    """``∮ (½(e'''f - ef''') - R(e'f - ef')) dz`` for vector fields ``e``, ``f``."""
    e, f = _rep(e, -1, "e"), _rep(f, -1, "f")
    half = HalfInteger("1/2").as_rational()
    terms = [(half, [(e, 3), (f, 0)]), (-half, [(e, 0), (f, 3)])]
    if not R.is_zero():
        terms += [(-1, [(R, 0), (e, 1), (f, 0)]), (1, [(R, 0), (e, 0), (f, 1)])]
    return _cycle_sum(cycle, geom, terms)


def psi4(e, g, cycle: CycleClass, geom: MarkedSphere, T: RationalFunction = ZERO_RF) -> GaussianRational:
    """``∮ (e g'' + T e g') dz`` for a vector field ``e`` and a function ``g``."""
    e, g = _rep(e, -1, "e"), _rep(g, 0, "g")
    terms = [(1, [(e, 0), (g, 2)])]
    if not T.is_zero():
        terms.append((1, [(T, 0), (e, 0), (g, 1)]))
    return _cycle_sum(cycle, geom, terms)


def _phi_odd(phi, psi, cycle, geom, R) -> GaussianRational:
    a, b = _rep(phi, MINUS_HALF, "φ"), _rep(psi, MINUS_HALF, "ψ")
    terms = [(-1, [(a, 2), (b, 0)]), (-1, [(a, 0), (b, 2)])]
    if not R.is_zero():
        terms.append((1, [(R, 0), (a, 0), (b, 0)]))
    return _cycle_sum(cycle, geom, terms)


def super_phi(a: SuperElement, b: SuperElement, cycle: CycleClass, geom: MarkedSphere,
              R: RationalFunction = ZERO_RF) -> GaussianRational:
    """Bilinear cocycle on ``S``: ``ψ³`` on even pairs, the half-form integral on odd pairs, 0 on mixed."""
    val = ZERO
    if not (a.even_part.is_zero() or b.even_part.is_zero()):
        val = val + psi3(a.even_part, b.even_part, cycle, geom, R)
    if not (a.odd_part.is_zero() or b.odd_part.is_zero()):
        val = val + _phi_odd(a.odd_part, b.odd_part, cycle, geom, R)
    return val


@dataclass(frozen=True)
class CocycleSpec:
    """A geometric cocycle: its kind, the cycle class and the auxiliary data it needs."""

    kind: str
    geom: MarkedSphere
    cycle: CycleClass | None = None
    projective: ProjectiveConnection = ProjectiveConnection()
    affine: AffineConnection = AffineConnection()
    lie: FiniteLieAlgebra | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown cocycle kind {self.kind!r}; expected one of {KINDS}")
        if self.cycle is None:
            object.__setattr__(self, "cycle", separating_cycle(self.geom))
        self.cycle.check(self.geom)
        if self.kind in ("psi3", "superPhi"):
            diag = validate_connection("projective", self.projective, self.geom)
            if not diag.valid:
                raise GeometryError(f"invalid projective connection: {diag.violations}")
        if self.kind == "psi4":
            diag = validate_connection("affine", self.affine, self.geom)
            if not diag.valid:
                raise GeometryError(f"invalid affine connection: {diag.violations}")
        if self.kind == "psi2" and self.lie is None:
            raise ValueError("psi2 needs a finite-dimensional Lie algebra with its form β")

    @property
    def R(self) -> RationalFunction:
        return self.projective.local_data

    @property
    def T(self) -> RationalFunction:
        return self.affine.local_data

    def __call__(self, x, y) -> GaussianRational:
        """Value on a pair of algebra elements (pulled back to ``D¹`` where needed)."""
        k, C, G = self.kind, self.cycle, self.geom
        if k == "superPhi":
            return super_phi(x, y, C, G, self.R)
        if k == "psi2":
            return psi2(x, y, self.lie, C, G)
        if isinstance(x, D1Element):
            if k == "psi1":
                return psi1(x.function_part, y.function_part, C, G)
            if k == "psi3":
                return psi3(x.vector_part, y.vector_part, C, G, self.R)
            return (psi4(x.vector_part, y.function_part, C, G, self.T)
                    - psi4(y.vector_part, x.function_part, C, G, self.T))
        if k == "psi1":
            return psi1(x, y, C, G)
        if k == "psi3":
            return psi3(x, y, C, G, self.R)
        return psi4(x, y, C, G, self.T)


def psi2(a: CurrentElement, b: CurrentElement, lie: FiniteLieAlgebra, cycle: CycleClass,
         geom: MarkedSphere) -> GaussianRational:
    """``β(x,y) ∮ g dh`` extended bilinearly."""
    acc = ZERO
    for i, g in a.components.items():
        for j, h in b.components.items():
            b_ij = lie.beta[i][j]
            if b_ij:
                acc = acc + b_ij * psi1(g, h, cycle, geom)
    return acc


def bracket_of(x, y, lie: FiniteLieAlgebra | None = None):
    """The algebra bracket chosen by element type (``A`` is abelian)."""
    if isinstance(x, SuperElement):
        return super_bracket(x, y)
    if isinstance(x, D1Element):
        return d1_bracket(x, y)
    if isinstance(x, CurrentElement):
        if lie is None:
            raise ValueError("current bracket needs the Lie algebra")
        return current_bracket(x, y, lie)
    if isinstance(x, MeromorphicForm):
        if x.weight == 0 and y.weight == 0:
            return MeromorphicForm.zero(0)
        if x.weight == -1 and y.weight == -1:
            return form_bracket(x, y)
    raise TypeError(f"no algebra bracket for {type(x).__name__}")


def cocycle_defect(psi: Callable, x, y, z, bracket: Callable | None = None) -> GaussianRational:
    """``ψ([x,y],z) + ψ([y,z],x) + ψ([z,x],y)``."""
    lie = getattr(psi, "lie", None)
    br = bracket or (lambda a, b: bracket_of(a, b, lie))
    return psi(br(x, y), z) + psi(br(y, z), x) + psi(br(z, x), y)


def super_cocycle_defect(phi: Callable, a: SuperElement, b: SuperElement, c: SuperElement) -> GaussianRational:
    """``(-1)^{āc̄} Φ(a,[b,c]) + (-1)^{b̄ā} Φ(b,[c,a]) + (-1)^{c̄b̄} Φ(c,[a,b])``."""
    pa, pb, pc = a.parity, b.parity, c.parity
    t1 = phi(a, super_bracket(b, c))
    t2 = phi(b, super_bracket(c, a))
    t3 = phi(c, super_bracket(a, b))
    return (-t1 if pa * pc else t1) + (-t2 if pb * pa else t2) + (-t3 if pc * pb else t3)


def l_invariance_defect(psi: Callable, e: MeromorphicForm, g: MeromorphicForm, h: MeromorphicForm) -> GaussianRational:
    """``ψ(e.g, h) + ψ(g, e.h)`` for a function cocycle ``ψ``."""
    from .forms import lie_derivative

    return psi(lie_derivative(e, g), h) + psi(g, lie_derivative(e, h))


# ---------------------------------------------------------------------------
# Locality
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LocalityWindow:
    M1: int
    M2: int

    def __post_init__(self):
        if self.M1 > self.M2:
            raise ValueError("M1 must not exceed M2")


@dataclass
class LocalityReport:
    window: LocalityWindow | None
    degree_window: tuple
    bounded_below: bool
    bounded_above: bool
    nonzero: int
    values: dict = field(default_factory=dict)

    @property
    def local(self) -> bool:
        return self.bounded_below and self.bounded_above

    def to_json(self) -> dict:
        return {
            "degree_window": [str(self.degree_window[0]), str(self.degree_window[1])],
            "support": None if self.window is None else [self.window.M1, self.window.M2],
            "bounded_below": self.bounded_below,
            "bounded_above": self.bounded_above,
            "local": self.local,
            "nonzero_values": self.nonzero,
        }


def _homogeneous_pairs(spec: CocycleSpec, lo, hi):
    """Pairs of homogeneous basis elements on which the cocycle kind is evaluated.

    Yields ``(label_x, label_y, x, y, total_degree)``.
    """
    G = spec.geom
    K = G.K
    pts = range(1, K + 1)
    if spec.kind in ("psi1", "psi3"):
        w = 0 if spec.kind == "psi1" else -1
        for n, m in itertools.product(degrees_in(w, lo, hi), repeat=2):
            for p, r in itertools.product(pts, repeat=2):
                yield (n, p), (m, r), basis_form(w, n, p, G), basis_form(w, m, r, G), n + m
    elif spec.kind == "psi4":
        for n, m in itertools.product(degrees_in(-1, lo, hi), degrees_in(0, lo, hi)):
            for p, r in itertools.product(pts, repeat=2):
                yield (n, p), (m, r), basis_form(-1, n, p, G), basis_form(0, m, r, G), n + m
    elif spec.kind == "psi2":
        lie = spec.lie
        idx = [(i, j) for i in range(lie.dimension) for j in range(lie.dimension) if lie.beta[i][j]]
        for n, m in itertools.product(degrees_in(0, lo, hi), repeat=2):
            for p, r in itertools.product(pts, repeat=2):
                for i, j in idx:
                    x = CurrentElement({i: basis_form(0, n, p, G)})
                    y = CurrentElement({j: basis_form(0, m, r, G)})
                    yield (n, p, i), (m, r, j), x, y, n + m
    else:
        for n, m in itertools.product(degrees_in(-1, lo, hi), repeat=2):
            for p, r in itertools.product(pts, repeat=2):
                yield (n, p), (m, r), SuperElement.even(basis_form(-1, n, p, G)), \
                    SuperElement.even(basis_form(-1, m, r, G)), n + m
        for n, m in itertools.product(degrees_in(MINUS_HALF, lo, hi), repeat=2):
            for p, r in itertools.product(pts, repeat=2):
                yield (n, p), (m, r), SuperElement.odd(basis_form(MINUS_HALF, n, p, G)), \
                    SuperElement.odd(basis_form(MINUS_HALF, m, r, G)), n + m


def locality_scan(spec: CocycleSpec, degree_window) -> LocalityReport:
    """Support of the cocycle in total degree ``n+m`` over homogeneous pairs.

    A side counts as bounded when the observed support stays strictly inside
    the range of total degrees the window can reach.
    """
    lo, hi = degree_window
    values = {}
    totals = []
    reach = []
    for lx, ly, x, y, tot in _homogeneous_pairs(spec, lo, hi):
        reach.append(int(tot))
        v = spec(x, y)
        if v:
            values[(lx, ly)] = v
            totals.append(int(tot))
    if not totals:
        return LocalityReport(None, (lo, hi), True, True, 0, values)
    M1, M2 = min(totals), max(totals)
    return LocalityReport(
        LocalityWindow(M1, M2),
        (lo, hi),
        bounded_below=M1 > min(reach),
        bounded_above=M2 < max(reach),
        nonzero=len(values),
        values=values,
    )


def locality_stability(spec: CocycleSpec, degree_window, growth: int = 4) -> dict:
    """Scan the window and the window grown by ``growth`` on both sides; compare supports."""
    lo, hi = degree_window
    small = locality_scan(spec, (lo, hi))
    big = locality_scan(spec, (lo - growth, hi + growth))
    return {
        "small": small,
        "grown": big,
        "stable": (small.window == big.window) and small.local and big.local,
    }


# ---------------------------------------------------------------------------
# Central extensions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtendedElement:
    """``x̂ + c·t`` in the central extension."""

    base: object
    central: GaussianRational = ZERO

    def __post_init__(self):
        object.__setattr__(self, "central", as_gaussian(self.central))


class CentralExtension:
    """Bracket ``[x̂, ŷ] = [x,y]^ + s·ψ(x,y)·t`` with ``t`` central."""

    def __init__(self, bracket: Callable, psi: Callable, rescale=1):
        self.base_bracket = bracket
        self.psi = psi
        self.rescale = as_gaussian(rescale)

    def bracket(self, a: ExtendedElement, b: ExtendedElement) -> ExtendedElement:
        return ExtendedElement(self.base_bracket(a.base, b.base), self.rescale * self.psi(a.base, b.base))

    def cocycle(self, x, y) -> GaussianRational:
        return self.rescale * self.psi(x, y)

    def jacobi_defect(self, a: ExtendedElement, b: ExtendedElement, c: ExtendedElement) -> ExtendedElement:
        br = self.bracket
        t1, t2, t3 = br(br(a, b), c), br(br(b, c), a), br(br(c, a), b)
        return ExtendedElement(t1.base + t2.base + t3.base, t1.central + t2.central + t3.central)


def central_extend(psi: Callable, sample: Sequence, bracket: Callable | None = None, rescale=1,
                   super_graded: bool = False) -> CentralExtension:
    """Certify ``psi`` on all triples of ``sample`` and build the extension.

    Raises :class:`CocycleError` with the first failing triple.
    """
    lie = getattr(psi, "lie", None)
    br = bracket or (lambda a, b: bracket_of(a, b, lie))
    for x, y, z in itertools.combinations_with_replacement(sample, 3):
        if super_graded:
            d = super_cocycle_defect(psi, x, y, z)
        else:
            d = cocycle_defect(psi, x, y, z, br)
        if d:
            raise CocycleError(f"cocycle condition fails with defect {d}", witness=(x, y, z))
    return CentralExtension(br, psi, rescale)
