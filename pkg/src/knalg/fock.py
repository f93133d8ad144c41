"""Semi-infinite wedge forms, b–c operators and the regularized action of ``D¹``.

Basis slots of weight ``λ`` are numbered by one integer ``s = k·K + (p-1)``
where the degree is ``n = n₀ + k`` (``n₀ = 0`` or ``1/2``).  This keeps the
lexicographic (degree, point) order as integer order, so a wedge monomial is
a finite sorted prefix followed by every slot from ``tail_start`` upward.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

from .algebras import D1Element, d1_bracket
from .exactnum import ONE, ZERO, GaussianRational, HalfInteger, as_gaussian
from .forms import MeromorphicForm, WeightError, form_product, lie_derivative
from .geometry import MarkedSphere
from .knbasis import GradedIndex, basis_form, expand_in_basis

__all__ = [
    "WedgeMonomial",
    "FockVector",
    "FockSpace",
    "ProbeDependenceError",
    "central_charge",
]


class ProbeDependenceError(ArithmeticError):
    """The commutator defect is not a multiple of the identity on the probe."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class WedgeMonomial:
    """``f_{prefix[0]} ∧ f_{prefix[1]} ∧ … ∧ f_{tail_start} ∧ f_{tail_start+1} ∧ …`` in slot numbers."""

    prefix: tuple
    tail_start: int

    @classmethod
    def make(cls, prefix: Iterable[int], tail_start: int) -> "WedgeMonomial":
        pre = list(prefix)
        while pre and pre[-1] == tail_start - 1:
            pre.pop()
            tail_start -= 1
        return cls(tuple(pre), tail_start)

    def occupied(self, j: int) -> bool:
        if j >= self.tail_start:
            return True
        return j in self.prefix

    def position(self, j: int) -> int | None:
        """Zero-based position of slot ``j`` in the wedge, or ``None`` if empty."""
        if j >= self.tail_start:
            return len(self.prefix) + (j - self.tail_start)
        for k, s in enumerate(self.prefix):
            if s == j:
                return k
            if s > j:
                break
        return None

    def insert(self, j: int):
        """``(sign, monomial)`` for ``f_j ∧ self`` or ``None`` when ``j`` is occupied."""
        if self.occupied(j):
            return None
        below = 0
        for s in self.prefix:
            if s < j:
                below += 1
            else:
                break
        pre = self.prefix[:below] + (j,) + self.prefix[below:]
        return (-1 if below % 2 else 1), WedgeMonomial.make(pre, self.tail_start)

    def remove(self, j: int):
        """``(sign, monomial)`` after contracting slot ``j`` or ``None`` when empty."""
        pos = self.position(j)
        if pos is None:
            return None
        sign = -1 if pos % 2 else 1
        if j < self.tail_start:
            pre = tuple(s for s in self.prefix if s != j)
            return sign, WedgeMonomial.make(pre, self.tail_start)
        pre = self.prefix + tuple(range(self.tail_start, j))
        return sign, WedgeMonomial.make(pre, j + 1)


class FockVector:
    """Finite linear combination of wedge monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        self.terms = {m: as_gaussian(c) for m, c in (terms or {}).items() if c}

    @classmethod
    def basis(cls, m: WedgeMonomial) -> "FockVector":
        return cls({m: ONE})

    def __add__(self, other: "FockVector") -> "FockVector":
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, ZERO) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return FockVector._raw(out)

    def __neg__(self):
        return FockVector._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "FockVector":
        c = as_gaussian(c)
        if not c:
            return FockVector()
        return FockVector._raw({m: v * c for m, v in self.terms.items()})

    @classmethod
    def _raw(cls, terms: dict) -> "FockVector":
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, FockVector):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self):
        return f"FockVector({len(self.terms)} terms)"


def _accumulate(out: dict, m: WedgeMonomial, c: GaussianRational):
    v = out.get(m, ZERO) + c
    if v:
        out[m] = v
    else:
        out.pop(m, None)


class FockSpace:
    """Semi-infinite wedge space of ``λ``-forms with reference vacuum of degree ``T_ref``."""

    def __init__(self, weight, geom: MarkedSphere, T_ref=None):
        self.weight = weight if isinstance(weight, HalfInteger) else HalfInteger(weight)
        self.geom = geom
        self.K = geom.K
        self.base = HalfInteger(0) if self.weight.is_integer else HalfInteger("1/2")
        self.reference = self.slot(self.base if T_ref is None else self._degree(T_ref), 1)

    def _degree(self, n) -> HalfInteger:
        n = n if isinstance(n, HalfInteger) else HalfInteger(n)
        if n.is_integer != self.weight.is_integer:
            raise ValueError(f"degree {n} is not in J_λ for λ = {self.weight}")
        return n

    # -- slots ---------------------------------------------------------------

    def slot(self, degree, p: int) -> int:
        d = self._degree(degree)
        if not 1 <= p <= self.K:
            raise ValueError(f"point index {p} outside 1..{self.K}")
        return int(d - self.base) * self.K + (p - 1)

    def index(self, s: int) -> GradedIndex:
        k, r = divmod(s, self.K)
        return GradedIndex(self.weight, self.base + k, r + 1)

    def slot_degree(self, s: int) -> HalfInteger:
        return self.base + s // self.K

    # -- vectors -------------------------------------------------------------

    def vacuum(self, T=None) -> WedgeMonomial:
        """Empty prefix with the tail starting at ``f^λ_{(T,1)}`` (default: the reference)."""
        if T is None:
            return WedgeMonomial((), self.reference)
        return WedgeMonomial((), self.slot(self._degree(T), 1))

    def vacuum_vector(self, T=None) -> FockVector:
        return FockVector.basis(self.vacuum(T))

    def monomial(self, prefix: Iterable, tail_start) -> WedgeMonomial:
        """Monomial from ``(degree, point)`` pairs; ``tail_start`` is a pair too."""
        pre = sorted(self.slot(d, p) for d, p in prefix)
        if len(set(pre)) != len(pre):
            raise ValueError("repeated index in wedge monomial")
        t = self.slot(*tail_start)
        if pre and pre[-1] >= t:
            raise ValueError("prefix entries must lie below tail_start")
        return WedgeMonomial.make(pre, t)

    def monomials_in_window(self, lo, hi) -> list:
        """Every monomial whose prefix and tail start lie in degrees ``[lo, hi+1]``."""
        s_lo = self.slot(self._first_degree(lo), 1)
        s_hi = self.slot(self._first_degree(HalfInteger(hi) + 1), 1)
        out = set()
        for t in range(s_lo, s_hi + 1):
            free = range(s_lo, t)
            for r in range(len(free) + 1):
                for pre in itertools.combinations(free, r):
                    out.add(WedgeMonomial.make(pre, t))
        return sorted(out, key=lambda m: (m.tail_start, m.prefix))

    def _first_degree(self, lo) -> HalfInteger:
        lo = HalfInteger(lo)
        return lo if lo.is_integer == self.weight.is_integer else lo + HalfInteger("1/2")

    def describe(self, m: WedgeMonomial) -> dict:
        def pair(s):
            i = self.index(s)
            return [str(i.degree), i.point]

        return {"prefix": [pair(s) for s in m.prefix], "tail_start": pair(m.tail_start)}

    # -- b–c operators -------------------------------------------------------

    def wedge_slot(self, j: int, v: FockVector) -> FockVector:
        out: dict = {}
        for m, c in v.terms.items():
            r = m.insert(j)
            if r is not None:
                _accumulate(out, r[1], c if r[0] > 0 else -c)
        return FockVector._raw(out)

    def contract_slot(self, j: int, v: FockVector) -> FockVector:
        out: dict = {}
        for m, c in v.terms.items():
            r = m.remove(j)
            if r is not None:
                _accumulate(out, r[1], c if r[0] > 0 else -c)
        return FockVector._raw(out)

    def _coeffs(self, f: MeromorphicForm, weight) -> dict:
        if f.is_zero():
            return {}
        if f.weight != weight:
            raise WeightError(f"expected weight {weight}, got {f.weight}")
        return _expansion(f, self.geom)

    def wedge_op(self, f: MeromorphicForm, v: FockVector) -> FockVector:
        """``Φ ↦ f ∧ Φ`` for a ``λ``-form ``f``."""
        out = FockVector()
        for idx, c in self._coeffs(f, self.weight).items():
            out = out + self.wedge_slot(self.slot(idx.degree, idx.point), v).scale(c)
        return out

    def contraction_op(self, g: MeromorphicForm, v: FockVector) -> FockVector:
        """Contraction with a ``(1-λ)``-form via the residue pairing."""
        out = FockVector()
        for idx, c in self._coeffs(g, 1 - self.weight).items():
            j = self.slot(-idx.degree, idx.point)
            out = out + self.contract_slot(j, v).scale(c)
        return out

    # -- regularized action --------------------------------------------------

    def _column(self, x: D1Element, s: int) -> dict:
        """Coefficients of ``x·f_s`` as ``{slot: c}``."""
        return _column_cached(x, self.weight, s, self.geom)

    def _min_shift(self, x: D1Element) -> int:
        degs = [i.degree for i in _expansion(x.vector_part, self.geom)] if not x.vector_part.is_zero() else []
        degs += [i.degree for i in _expansion(x.function_part, self.geom)] if not x.function_part.is_zero() else []
        if not degs:
            return 0
        return int(min(degs))

    def regularized_action(self, x: D1Element, v: FockVector) -> FockVector:
        """``ρ(x) = sum a_{ji} :ψ_j ψ*_i:`` normal ordered against the reference vacuum."""
        if not isinstance(x, D1Element):
            raise TypeError("regularized_action expects a D1Element")
        shift = self._min_shift(x)
        out: dict = {}
        ref = self.reference
        for m, c in v.terms.items():
            diag = ZERO
            slots = list(m.prefix)
            # tail slots whose image can reach an empty slot below the tail
            span = max(0, -shift) * self.K + 2 * self.K
            slots += list(range(m.tail_start, m.tail_start + span))
            for i in slots:
                col = self._column(x, i)
                for j, a in col.items():
                    if j == i:
                        continue
                    r = m.remove(i)
                    if r is None:
                        continue
                    r2 = r[1].insert(j)
                    if r2 is None:
                        continue
                    sign = r[0] * r2[0]
                    _accumulate(out, r2[1], c * a if sign > 0 else -(c * a))
            # diagonal part: occupied below the reference minus holes at or above it
            lo = min(m.prefix[0] if m.prefix else m.tail_start, ref)
            for i in range(lo, max(ref, m.tail_start)):
                occ = m.occupied(i)
                if i < ref and occ:
                    diag = diag + self._column(x, i).get(i, ZERO)
                elif i >= ref and not occ:
                    diag = diag - self._column(x, i).get(i, ZERO)
            if diag:
                _accumulate(out, m, c * diag)
        return FockVector._raw(out)

    def rep_cocycle(self, x: D1Element, y: D1Element, probe: WedgeMonomial) -> GaussianRational:
        """Scalar ``χ`` with ``[ρx, ρy]v - ρ([x,y])v = χ v`` on the probe monomial."""
        v = FockVector.basis(probe)
        rho = self.regularized_action
        lhs = rho(x, rho(y, v)) - rho(y, rho(x, v)) - rho(d1_bracket(x, y), v)
        chi = lhs.terms.get(probe, ZERO)
        rest = {m: c for m, c in lhs.terms.items() if m != probe}
        if rest:
            raise ProbeDependenceError("commutator defect is not scalar on the probe", witness=rest)
        return chi


@lru_cache(maxsize=None)
def _expansion_cached(f: MeromorphicForm, geom: MarkedSphere):
    return tuple(expand_in_basis(f, geom).items())


def _expansion(f: MeromorphicForm, geom: MarkedSphere) -> dict:
    return dict(_expansion_cached(f, geom))


@lru_cache(maxsize=None)
def _column_cached(x: D1Element, weight: HalfInteger, s: int, geom: MarkedSphere) -> dict:
    K = geom.K
    base = HalfInteger(0) if weight.is_integer else HalfInteger("1/2")
    k, r = divmod(s, K)
    f = basis_form(weight, base + k, r + 1, geom)
    img = lie_derivative(x.vector_part, f) + form_product(x.function_part, f)
    out = {}
    for idx, c in expand_in_basis(img, geom).items():
        out[int(idx.degree - base) * K + (idx.point - 1)] = c
    return out


def central_charge(weight) -> GaussianRational:
    """``c_λ = -2(6λ² - 6λ + 1)``."""
    lam = as_gaussian(weight if not isinstance(weight, HalfInteger) else weight.as_rational())
    return (lam * lam * 6 - lam * 6 + 1) * (-2)
