"""Almost-graded bases f^λ_{n,p}, the residue pairing and structure constants."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

from .exactnum import ONE, ZERO, GaussianRational, HalfInteger, as_gaussian, random_gaussian
from .forms import (
    MeromorphicForm,
    WeightError,
    form_bracket,
    form_product,
    order_at_infinity,
)
from .geometry import MarkedSphere
from .linsolve import solve
from .ratfunc import (
    ONE_POLY,
    Polynomial,
    RationalFunction,
    local_expansion,
    order_at,
)

__all__ = [
    "GradedIndex",
    "BasisElement",
    "StructureConstantTable",
    "GradingBounds",
    "degrees_in",
    "basis_element",
    "basis_form",
    "kn_pairing",
    "expand_in_basis",
    "expand_in_basis_by_solve",
    "combine_basis",
    "structure_constants",
    "grading_bounds",
    "leading_term_defects",
    "filtration_membership",
    "triangular_decompose",
    "random_form",
    "degree_json",
    "leading_coefficient",
]


@dataclass(frozen=True, order=False)
class GradedIndex:
    """Address ``(λ, n, p)`` of the basis element ``f^λ_{n,p}`` (``p`` is 1-based)."""

    weight: HalfInteger
    degree: HalfInteger
    point: int

    def __post_init__(self):
        w = self.weight if isinstance(self.weight, HalfInteger) else HalfInteger(self.weight)
        d = self.degree if isinstance(self.degree, HalfInteger) else HalfInteger(self.degree)
        if w.is_integer != d.is_integer:
            raise ValueError(f"degree {d} is not in J_λ for weight {w}")
        if int(self.point) < 1:
            raise ValueError("point index is 1-based")
        object.__setattr__(self, "weight", w)
        object.__setattr__(self, "degree", d)
        object.__setattr__(self, "point", int(self.point))

    def sort_key(self):
        return (self.degree.twice, self.point)

    def __repr__(self):
        return f"GradedIndex({self.weight}, {self.degree}, {self.point})"


@dataclass(frozen=True)
class BasisElement:
    index: GradedIndex
    form: MeromorphicForm
    exponents: tuple  # exponent of (z - P_i) for each in-point
    normalization: GaussianRational


def degrees_in(weight, lo, hi) -> list:
    """Elements of ``J_λ`` inside the closed interval ``[lo, hi]``."""
    w = weight if isinstance(weight, HalfInteger) else HalfInteger(weight)
    lo2 = HalfInteger(lo).twice
    hi2 = HalfInteger(hi).twice
    parity = w.twice % 2
    start = lo2 if lo2 % 2 == parity else lo2 + 1
    return [HalfInteger(twice=t) for t in range(start, hi2 + 1, 2)]


def _exponents(weight: HalfInteger, degree: HalfInteger, p: int, K: int) -> list:
    base = int(degree + 1 - weight)
    return [base - (1 if i == p else 0) for i in range(1, K + 1)]


@lru_cache(maxsize=None)
def _basis_cached(weight: HalfInteger, degree: HalfInteger, p: int, geom: MarkedSphere) -> BasisElement:
    K = geom.K
    if not 1 <= p <= K:
        raise ValueError(f"point index {p} outside 1..{K}")
    exps = _exponents(weight, degree, p, K)
    P = geom.in_points
    lead = ONE
    for i in range(K):
        if i != p - 1 and exps[i]:
            lead = lead * (P[p - 1] - P[i]) ** exps[i]
    c = lead.inverse()
    rep = RationalFunction.from_factored(c, {P[i]: exps[i] for i in range(K)})
    idx = GradedIndex(weight, degree, p)
    return BasisElement(idx, MeromorphicForm(weight, rep), tuple(exps), c)


def basis_element(idx: GradedIndex, geom: MarkedSphere) -> BasisElement:
    """The normalized basis element with prescribed orders at all in-points.

    It is ``c * prod_i (z - P_i)^{(n+1-λ) - δ_i^p}`` with ``c`` chosen so the
    expansion in ``z_p = z - P_p`` starts with ``z_p^{n-λ} (1 + O(z_p))``.
    """
    return _basis_cached(idx.weight, idx.degree, idx.point, geom)


def basis_form(weight, degree, p: int, geom: MarkedSphere) -> MeromorphicForm:
    w = weight if isinstance(weight, HalfInteger) else HalfInteger(weight)
    d = degree if isinstance(degree, HalfInteger) else HalfInteger(degree)
    if w.is_integer != d.is_integer:
        raise ValueError(f"degree {d} is not in J_λ for weight {w}")
    return _basis_cached(w, d, int(p), geom).form


def _residue_pair(f_rep: RationalFunction, f_ord: int, g_rep: RationalFunction, point) -> GaussianRational:
    """Residue of ``f g dz`` at ``point`` given ``ord_point(f) = f_ord``."""
    g_ord = order_at(g_rep, point)
    if f_ord + g_ord >= 0:
        return ZERO
    sf = local_expansion(f_rep, point, -1 - g_ord)
    sg = local_expansion(g_rep, point, -1 - f_ord)
    acc = ZERO
    for k, v in sf.coeffs.items():
        w = sg.coeffs.get(-1 - k)
        if w is not None:
            acc = acc + v * w
    return acc


def kn_pairing(f: MeromorphicForm, g: MeromorphicForm, geom: MarkedSphere) -> GaussianRational:
    """Sum over the in-points of the residues of ``f·g``; weights must add to 1."""
    if f.weight + g.weight != 1:
        raise WeightError(f"pairing needs weights adding to 1, got {f.weight} and {g.weight}")
    if f.is_zero() or g.is_zero():
        return ZERO
    acc = ZERO
    for P in geom.in_points:
        acc = acc + _residue_pair(f.rep, order_at(f.rep, P), g.rep, P)
    return acc


def _degree_range(f: MeromorphicForm, geom: MarkedSphere):
    """Lowest and highest degree that can occur in the basis expansion of ``f``."""
    lam = f.weight
    lowest = min(order_at(f.rep, P) for P in geom.in_points)
    n_min = lam + int(lowest)
    o_inf = order_at_infinity(f)
    # the dual element of degree -n has order K(n-λ) + 2λ - 1 at ∞
    bound = 1 - lam.twice - int(o_inf)
    k_max = -((-bound) // geom.K) - 1
    n_max = lam + k_max
    return n_min, n_max


def expand_in_basis(f: MeromorphicForm, geom: MarkedSphere) -> dict:
    """Coefficients ``{GradedIndex: c}`` of ``f`` in the basis, by duality pairing."""
    if f.is_zero():
        return {}
    lam = f.weight
    n_min, n_max = _degree_range(f, geom)
    dual_w = 1 - lam
    ords = [int(order_at(f.rep, P)) for P in geom.in_points]
    out = {}
    for n in degrees_in(lam, n_min, n_max):
        for p in range(1, geom.K + 1):
            dual = _basis_cached(dual_w, -n, p, geom).form.rep
            acc = ZERO
            for P, o in zip(geom.in_points, ords):
                acc = acc + _residue_pair(f.rep, o, dual, P)
            if acc:
                out[GradedIndex(lam, n, p)] = acc
    return out


def combine_basis(coeffs: Mapping, weight, geom: MarkedSphere) -> MeromorphicForm:
    """``sum c * f^λ_{n,p}`` assembled over one common denominator."""
    w = weight if isinstance(weight, HalfInteger) else HalfInteger(weight)
    terms = [(idx, as_gaussian(c)) for idx, c in coeffs.items() if c]
    if not terms:
        return MeromorphicForm.zero(w)
    K = geom.K
    elems = [(basis_element(idx, geom), c) for idx, c in terms]
    for be, _ in elems:
        if be.index.weight != w:
            raise WeightError("mixed weights in basis combination")
    low = [min(0, min(be.exponents[i] for be, _ in elems)) for i in range(K)]
    lin = [Polynomial.linear_factor(P) for P in geom.in_points]
    num = Polynomial(())
    for be, c in elems:
        part = Polynomial.constant(be.normalization * c)
        for i in range(K):
            e = be.exponents[i] - low[i]
            if e:
                part = part * lin[i] ** e
        num = num + part
    den = ONE_POLY
    for i in range(K):
        if low[i]:
            den = den * lin[i] ** (-low[i])
    return MeromorphicForm(w, RationalFunction(num, den))


def expand_in_basis_by_solve(f: MeromorphicForm, geom: MarkedSphere) -> dict:
    """Same coefficients as :func:`expand_in_basis`, by an exact linear solve.

    Both sides of ``f = sum a_{n,p} f_{n,p}`` are cleared of denominators and
    compared coefficient-wise; no pairing is used.
    """
    if f.is_zero():
        return {}
    lam = f.weight
    n_min, n_max = _degree_range(f, geom)
    idxs = [GradedIndex(lam, n, p) for n in degrees_in(lam, n_min, n_max) for p in range(1, geom.K + 1)]
    K = geom.K
    lin = [Polynomial.linear_factor(P) for P in geom.in_points]
    f_den_ord = [max(0, -int(order_at(f.rep, P))) for P in geom.in_points]
    clear = list(f_den_ord)
    elems = [basis_element(i, geom) for i in idxs]
    for be in elems:
        for i in range(K):
            clear[i] = max(clear[i], -be.exponents[i])
    D = ONE_POLY
    for i in range(K):
        D = D * lin[i] ** clear[i]
    lhs = (RationalFunction.from_poly(D) * f.rep)
    if not lhs.is_polynomial():
        raise ValueError("form has poles outside the in-points")
    cols = []
    for be in elems:
        part = Polynomial.constant(be.normalization)
        for i in range(K):
            e = be.exponents[i] + clear[i]
            part = part * lin[i] ** e
        cols.append(part.coeffs)
    nrows = max([len(lhs.num.coeffs)] + [len(c) for c in cols])
    A = [[c[r] if r < len(c) else ZERO for c in cols] for r in range(nrows)]
    b = [lhs.num.coeffs[r] if r < len(lhs.num.coeffs) else ZERO for r in range(nrows)]
    x = solve(A, b)
    if x is None:
        raise ArithmeticError("form is not in the span of the predicted basis range")
    return {i: v for i, v in zip(idxs, x) if v}


# ---------------------------------------------------------------------------
# Structure constants and almost-grading
# ---------------------------------------------------------------------------


@dataclass
class GradingBounds:
    lower_shift: int
    upper_shift: int


@dataclass
class StructureConstantTable:
    op_kind: str
    weights: tuple
    window: tuple
    geom: MarkedSphere
    entries: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        rows = []
        for (n, p, m, r), terms in sorted(self.entries.items(), key=lambda kv: (kv[0][0].twice, kv[0][1], kv[0][2].twice, kv[0][3])):
            rows.append({
                "n": degree_json(n), "p": p, "m": degree_json(m), "r": r,
                "terms": [{"h": degree_json(h), "s": s, "c": str(c)}
                          for (h, s), c in sorted(terms.items(), key=lambda kv: (kv[0][0].twice, kv[0][1]))],
            })
        return {
            "op": self.op_kind,
            "lambda": str(self.weights[0]),
            "nu": str(self.weights[1]),
            "in_points": [str(P) for P in self.geom.in_points],
            "local_coordinates": "z_p = z - P_p",
            "entries": rows,
        }


def degree_json(d: HalfInteger):
    return int(d) if d.is_integer else str(d)


def _cell(args):
    lam, nu, op_kind, n, p, m, r, geom = args
    a = _basis_cached(lam, n, p, geom).form
    b = _basis_cached(nu, m, r, geom).form
    res = form_product(a, b) if op_kind == "product" else form_bracket(a, b)
    coeffs = expand_in_basis(res, geom)
    return (n, p, m, r), {(i.degree, i.point): c for i, c in coeffs.items()}


def structure_constants(lam, nu, op_kind: str, window, geom: MarkedSphere, jobs: int = 1) -> StructureConstantTable:
    """Expansion of every product/bracket of basis elements with degrees in ``window``."""
    if op_kind not in ("product", "bracket"):
        raise ValueError(f"op_kind must be 'product' or 'bracket', not {op_kind!r}")
    lam = lam if isinstance(lam, HalfInteger) else HalfInteger(lam)
    nu = nu if isinstance(nu, HalfInteger) else HalfInteger(nu)
    lo, hi = window
    cells = [
        (lam, nu, op_kind, n, p, m, r, geom)
        for n in degrees_in(lam, lo, hi)
        for m in degrees_in(nu, lo, hi)
        for p in range(1, geom.K + 1)
        for r in range(1, geom.K + 1)
    ]
    table = StructureConstantTable(op_kind, (lam, nu), (lo, hi), geom)
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_cell, cells, chunksize=max(1, len(cells) // (4 * jobs))))
    else:
        results = [_cell(c) for c in cells]
    for key, terms in results:
        table.entries[key] = terms
    return table


def grading_bounds(table: StructureConstantTable) -> GradingBounds:
    """Minimal and maximal ``h - (n+m)`` over all nonzero table entries."""
    shifts = [
        int(h - (n + m))
        for (n, p, m, r), terms in table.entries.items()
        for (h, s) in terms
    ]
    if not shifts:
        raise ValueError("structure-constant table has no nonzero entries")
    return GradingBounds(min(shifts), max(shifts))


def leading_coefficient(op_kind: str, lam, nu, n, p, m, r, s) -> GaussianRational:
    """Closed-form coefficient of ``f_{n+m,s}`` in the product or bracket."""
    if p != r or s != r:
        return ZERO
    if op_kind == "product":
        return ONE
    return as_gaussian(-(lam * m) + nu * n)


def leading_term_defects(table: StructureConstantTable) -> list:
    """Cells whose degree-``n+m`` part differs from the closed forms."""
    lam, nu = table.weights
    bad = []
    K = table.geom.K
    for (n, p, m, r), terms in table.entries.items():
        for s in range(1, K + 1):
            got = terms.get((n + m, s), ZERO)
            want = leading_coefficient(table.op_kind, lam, nu, n, p, m, r, s)
            if got != want:
                bad.append({"n": n, "p": p, "m": m, "r": r, "s": s, "got": got, "want": want})
    return bad


def filtration_membership(f: MeromorphicForm, n, geom: MarkedSphere) -> bool:
    """``f`` lies in ``F_(n)`` iff ``ord_{P_i}(f) >= n - λ`` at every in-point."""
    if f.is_zero():
        return True
    n = n if isinstance(n, HalfInteger) else HalfInteger(n)
    need = n - f.weight
    return all(order_at(f.rep, P) >= int(need) for P in geom.in_points)


def triangular_decompose(f: MeromorphicForm, geom: MarkedSphere, R: int) -> tuple:
    """Split ``f`` into parts of degree ``> 0``, in ``[-R, 0]`` and ``< -R``."""
    coeffs = expand_in_basis(f, geom)
    plus = {i: c for i, c in coeffs.items() if i.degree > 0}
    zero = {i: c for i, c in coeffs.items() if -R <= i.degree <= 0}
    minus = {i: c for i, c in coeffs.items() if i.degree < -R}
    w = f.weight
    return combine_basis(plus, w, geom), combine_basis(zero, w, geom), combine_basis(minus, w, geom)


def random_form(weight, geom: MarkedSphere, rng, lo=-3, hi=3, terms: int = 3) -> MeromorphicForm:
    """Seeded random combination of basis elements with degrees in ``[lo, hi]``."""
    w = weight if isinstance(weight, HalfInteger) else HalfInteger(weight)
    degs = degrees_in(w, lo, hi)
    coeffs = {}
    for _ in range(terms):
        idx = GradedIndex(w, rng.choice(degs), rng.randint(1, geom.K))
        coeffs[idx] = coeffs.get(idx, ZERO) + random_gaussian(rng)
    return combine_basis(coeffs, w, geom)
