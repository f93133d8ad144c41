"""Meromorphic λ-forms ``f(z) dz^λ`` and their product, bracket and Lie derivative."""
from __future__ import annotations

import math
from typing import Mapping

from .exactnum import HalfInteger, as_gaussian
from .ratfunc import INF, ZERO_RF, RationalFunction, divide_out_root, order_at

__all__ = [
    "WeightError",
    "MeromorphicForm",
    "FormSum",
    "form",
    "form_product",
    "form_bracket",
    "lie_derivative",
    "poisson_defects",
    "order_at_infinity",
    "pole_violations",
]


class WeightError(ValueError):
    """Operation applied to forms of the wrong weight."""


class MeromorphicForm:
    """A form ``rep(z) (dz)^weight`` given by its z-chart representative."""

    __slots__ = ("weight", "rep", "_hash")

    def __init__(self, weight, rep):
        self.weight = weight if isinstance(weight, HalfInteger) else HalfInteger(weight)
        if not isinstance(rep, RationalFunction):
            from .geometry import parse_rational_function

            rep = parse_rational_function(rep)
        self.rep = rep
        self._hash = None

    def is_zero(self) -> bool:
        return self.rep.is_zero()

    def __bool__(self):
        return not self.rep.is_zero()

    def __eq__(self, other):
        if not isinstance(other, MeromorphicForm):
            return NotImplemented
        if self.rep.is_zero() and other.rep.is_zero():
            return True
        return self.weight == other.weight and self.rep == other.rep

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.weight, self.rep)) if not self.rep.is_zero() else hash(0)
        return self._hash

    def __reduce__(self):
        return (MeromorphicForm, (self.weight, self.rep))

    def _check(self, other: "MeromorphicForm"):
        if self.weight != other.weight and not (self.is_zero() or other.is_zero()):
            raise WeightError(f"cannot add forms of weight {self.weight} and {other.weight}")

    def __add__(self, other: "MeromorphicForm") -> "MeromorphicForm":
        self._check(other)
        w = self.weight if not self.is_zero() else other.weight
        return MeromorphicForm(w, self.rep + other.rep)

    def __sub__(self, other: "MeromorphicForm") -> "MeromorphicForm":
        self._check(other)
        w = self.weight if not self.is_zero() else other.weight
        return MeromorphicForm(w, self.rep - other.rep)

    def __neg__(self):
        return MeromorphicForm(self.weight, -self.rep)

    def scale(self, c) -> "MeromorphicForm":
        return MeromorphicForm(self.weight, self.rep.scale(c))

    def __rmul__(self, c):
        return self.scale(c)

    def __repr__(self):
        return f"MeromorphicForm({self.weight}, {self.rep})"

    def to_dict(self) -> dict:
        return {"weight": str(self.weight), **self.rep.to_dict()}

    @classmethod
    def from_dict(cls, d: Mapping) -> "MeromorphicForm":
        return cls(HalfInteger(str(d["weight"])), RationalFunction.from_dict(d))

    @classmethod
    def zero(cls, weight) -> "MeromorphicForm":
        return cls(weight, ZERO_RF)


def form(weight, rep) -> MeromorphicForm:
    """Shorthand constructor accepting strings such as ``"z^2 + 3/z"``."""
    return MeromorphicForm(weight, rep)


def order_at_infinity(f: MeromorphicForm):
    """Order of the form at ∞: ``ord_∞(rep) - 2λ`` from ``dz = -w^-2 dw``."""
    o = order_at(f.rep, INF)
    if o is math.inf:
        return o
    return o - f.weight.twice


def pole_violations(f: MeromorphicForm, geom) -> list:
    """Finite points outside the in-points where ``f`` has a pole (empty when admissible)."""
    rest = f.rep.den
    for p in geom.in_points:
        rest = divide_out_root(rest, p)[0]
    return [] if rest.degree <= 0 else [str(rest)]


def form_product(s: MeromorphicForm, t: MeromorphicForm) -> MeromorphicForm:
    """Tensor product of forms: weights add, representatives multiply."""
    return MeromorphicForm(s.weight + t.weight, s.rep * t.rep)


def form_bracket(s: MeromorphicForm, t: MeromorphicForm) -> MeromorphicForm:
    """Poisson bracket ``((-λ) s t' + ν t s') dz^{λ+ν+1}``."""
    lam = as_gaussian(s.weight)
    nu = as_gaussian(t.weight)
    w = s.weight + t.weight + 1
    if s.is_zero() or t.is_zero():
        return MeromorphicForm(w, ZERO_RF)
    rep = ZERO_RF
    if lam:
        rep = rep + (s.rep * t.rep.derivative()).scale(-lam)
    if nu:
        rep = rep + (t.rep * s.rep.derivative()).scale(nu)
    return MeromorphicForm(w, rep)


def lie_derivative(e: MeromorphicForm, g: MeromorphicForm) -> MeromorphicForm:
    """Action of the vector field ``e`` on the λ-form ``g``: ``(e g' + λ g e') dz^λ``."""
    if e.weight != -1:
        raise WeightError(f"Lie derivative needs a vector field (weight -1), got weight {e.weight}")
    lam = as_gaussian(g.weight)
    if e.is_zero() or g.is_zero():
        return MeromorphicForm(g.weight, ZERO_RF)
    rep = e.rep * g.rep.derivative()
    if lam:
        rep = rep + (g.rep * e.rep.derivative()).scale(lam)
    return MeromorphicForm(g.weight, rep)


class FormSum:
    """Finite sum of forms of distinct weights, an element of ``F = ⊕ F^λ``."""

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        acc: dict = {}
        items = terms.values() if isinstance(terms, Mapping) else terms
        for f in items:
            if isinstance(f, FormSum):
                for g in f.terms.values():
                    acc[g.weight] = acc[g.weight] + g if g.weight in acc else g
                continue
            acc[f.weight] = acc[f.weight] + f if f.weight in acc else f
        self.terms = {w: f for w, f in acc.items() if not f.is_zero()}

    def __add__(self, other):
        other = other if isinstance(other, FormSum) else FormSum([other])
        return FormSum(list(self.terms.values()) + list(other.terms.values()))

    def __neg__(self):
        return FormSum([-f for f in self.terms.values()])

    def __sub__(self, other):
        other = other if isinstance(other, FormSum) else FormSum([other])
        return self + (-other)

    def scale(self, c):
        return FormSum([f.scale(c) for f in self.terms.values()])

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, MeromorphicForm):
            other = FormSum([other])
        if not isinstance(other, FormSum):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return "FormSum(" + ", ".join(repr(f) for _, f in sorted(self.terms.items(), key=lambda kv: kv[0].twice)) + ")"

    def product(self, other: "FormSum") -> "FormSum":
        return FormSum([form_product(a, b) for a in self.terms.values() for b in other.terms.values()])

    def bracket(self, other: "FormSum") -> "FormSum":
        return FormSum([form_bracket(a, b) for a in self.terms.values() for b in other.terms.values()])


def _as_sum(x) -> FormSum:
    return x if isinstance(x, FormSum) else FormSum([x])


def poisson_defects(a, b, c) -> tuple:
    """Jacobi and Leibniz defects of the Poisson structure on ``(a, b, c)``.

    ``jacobi = [[a,b],c] + [[b,c],a] + [[c,a],b]`` and
    ``leibniz = [a, b·c] - [a,b]·c - b·[a,c]``; both vanish identically.
    """
    a, b, c = _as_sum(a), _as_sum(b), _as_sum(c)
    jacobi = a.bracket(b).bracket(c) + b.bracket(c).bracket(a) + c.bracket(a).bracket(b)
    leibniz = a.bracket(b.product(c)) - a.bracket(b).product(c) - b.product(a.bracket(c))
    return jacobi, leibniz
