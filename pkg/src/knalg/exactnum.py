"""Exact scalars: rationals, Gaussian rationals and half-integers.

Rationals are ``gmpy2.mpq`` values (always reduced, positive denominator).
Gaussian rationals ``a + b*I`` are the coefficient field for everything else
in the package; half-integers carry form weights and degrees.
"""
from __future__ import annotations

import re
from fractions import Fraction
from numbers import Integral, Rational as _RationalABC

from gmpy2 import mpq

Rational = type(mpq(0))

__all__ = [
    "Rational",
    "GaussianRational",
    "HalfInteger",
    "as_rational",
    "as_gaussian",
    "gr_add",
    "gr_mul",
    "gr_div",
    "random_gaussian",
    "ZERO",
    "ONE",
    "I",
]

_ZQ = mpq(0)
_OQ = mpq(1)


def as_rational(x) -> Rational:
    """Coerce ints, Fractions, mpq and strings like ``"-3/4"`` to mpq."""
    if isinstance(x, Rational):
        return x
    if isinstance(x, (Integral, Fraction)):
        return mpq(x)
    if isinstance(x, _RationalABC):
        return mpq(int(x.numerator), int(x.denominator))
    if isinstance(x, str):
        s = x.strip().replace("−", "-")
        if not re.fullmatch(r"[+-]?\d+(/\d+)?", s):
            raise ValueError(f"not an exact rational: {x!r}")
        return _parse_q(s)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def _parse_q(s: str) -> Rational:
    return mpq(s[1:] if s.startswith("+") else s)


def _fmt_rational(q: Rational) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class GaussianRational:
    """Immutable ``re + im*I`` with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", as_rational(re))
        object.__setattr__(self, "im", as_rational(im))

    @classmethod
    def _raw(cls, re: Rational, im: Rational) -> "GaussianRational":
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    def __reduce__(self):
        return (GaussianRational._raw, (self.re, self.im))

    # -- predicates -------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return not self.im

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self.re, -self.im)

    def norm(self) -> Rational:
        return self.re * self.re + self.im * self.im

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return GaussianRational._raw(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return GaussianRational._raw(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return GaussianRational._raw(a * c, _ZQ)
        return GaussianRational._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        if not self:
            raise ZeroDivisionError("division by zero Gaussian rational")
        if not self.im:
            return GaussianRational._raw(1 / self.re, _ZQ)
        n = self.norm()
        return GaussianRational._raw(self.re / n, -self.im / n)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other.im:
            if not other.re:
                raise ZeroDivisionError("division by zero Gaussian rational")
            return GaussianRational._raw(self.re / other.re, self.im / other.re)
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, Integral):
            raise TypeError("only integer powers")
        if k < 0:
            return self.inverse() ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    # -- formatting -------------------------------------------------------
    def __str__(self):
        if not self.im:
            return _fmt_rational(self.re)
        im = self.im
        sign = "+" if im > 0 else "-"
        mag = _fmt_rational(abs(im))
        if not self.re:
            return ("-" if im < 0 else "") + f"{mag}*I"
        return f"{_fmt_rational(self.re)}{sign}{mag}*I"

    def __repr__(self):
        return f"GaussianRational({str(self)!r})"

    @classmethod
    def parse(cls, text) -> "GaussianRational":
        """Parse ``"a/b"``, ``"a/b+c/d*I"``, ``"c/d*I"``, ``"I"`` or ``"-I"``."""
        if isinstance(text, GaussianRational):
            return text
        if not isinstance(text, str):
            return cls(text)
        s = text.replace(" ", "").replace("−", "-")
        if not s:
            raise ValueError("empty scalar")
        m = re.fullmatch(
            r"(?:(?P<re>[+-]?\d+(?:/\d+)?)(?=$|[+-]))?"
            r"(?:(?P<im>[+-]?(?:\d+(?:/\d+)?)?)\*?I)?",
            s,
        )
        if m is None or (m.group("re") is None and m.group("im") is None):
            raise ValueError(f"not an exact Gaussian rational: {text!r}")
        re_part = _parse_q(m.group("re")) if m.group("re") else _ZQ
        im_txt = m.group("im")
        if im_txt is None:
            im_part = _ZQ
        elif im_txt in ("", "+"):
            im_part = _OQ
        elif im_txt == "-":
            im_part = -_OQ
        else:
            im_part = _parse_q(im_txt)
        return cls._raw(re_part, im_part)


def _coerce(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (Integral, Rational, Fraction)):
        return GaussianRational._raw(mpq(x), _ZQ)
    if isinstance(x, HalfInteger):
        return GaussianRational._raw(mpq(x.twice, 2), _ZQ)
    return NotImplemented


def as_gaussian(x) -> GaussianRational:
    """Coerce numbers, half-integers and exact strings to a GaussianRational."""
    if isinstance(x, str):
        return GaussianRational.parse(x)
    g = _coerce(x)
    if g is NotImplemented:
        raise TypeError(f"cannot convert {type(x).__name__} to GaussianRational")
    return g


ZERO = GaussianRational._raw(_ZQ, _ZQ)
ONE = GaussianRational._raw(_OQ, _ZQ)
I = GaussianRational._raw(_ZQ, _OQ)


def gr_add(a: GaussianRational, b: GaussianRational) -> GaussianRational:
    return as_gaussian(a) + as_gaussian(b)


def gr_mul(a: GaussianRational, b: GaussianRational) -> GaussianRational:
    return as_gaussian(a) * as_gaussian(b)


def gr_div(a: GaussianRational, b: GaussianRational) -> GaussianRational:
    """Exact quotient; raises ``ZeroDivisionError`` when ``b == 0``."""
    return as_gaussian(a) / as_gaussian(b)


class HalfInteger:
    """An element of ½ℤ stored as twice its value."""

    __slots__ = ("twice",)

    def __init__(self, value=0, *, twice: int | None = None):
        if twice is not None:
            t = int(twice)
        elif isinstance(value, HalfInteger):
            t = value.twice
        elif isinstance(value, str):
            q = as_rational(value)
            if (2 * q).denominator != 1:
                raise ValueError(f"{value!r} is not a half-integer")
            t = int(2 * q)
        else:
            q = as_rational(value) if not isinstance(value, Integral) else mpq(int(value))
            if (2 * q).denominator != 1:
                raise ValueError(f"{value!r} is not a half-integer")
            t = int(2 * q)
        object.__setattr__(self, "twice", t)

    def __setattr__(self, name, value):
        raise AttributeError("HalfInteger is immutable")

    def __reduce__(self):
        return (_half_from_twice, (self.twice,))

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def as_rational(self) -> Rational:
        return mpq(self.twice, 2)

    def __int__(self):
        if self.twice % 2:
            raise ValueError(f"{self} is not an integer")
        return self.twice // 2

    def __index__(self):
        return int(self)

    def _other_twice(self, other):
        if isinstance(other, HalfInteger):
            return other.twice
        if isinstance(other, Integral):
            return 2 * int(other)
        return None

    def __add__(self, other):
        t = self._other_twice(other)
        if t is None:
            return NotImplemented
        return _half_from_twice(self.twice + t)

    __radd__ = __add__

    def __sub__(self, other):
        t = self._other_twice(other)
        if t is None:
            return NotImplemented
        return _half_from_twice(self.twice - t)

    def __rsub__(self, other):
        t = self._other_twice(other)
        if t is None:
            return NotImplemented
        return _half_from_twice(t - self.twice)

    def __neg__(self):
        return _half_from_twice(-self.twice)

    def __mul__(self, other):
        if isinstance(other, Integral):
            return _half_from_twice(self.twice * int(other))
        if isinstance(other, HalfInteger):
            return mpq(self.twice * other.twice, 4)
        return NotImplemented

    __rmul__ = __mul__

    def _cmp_key(self, other):
        t = self._other_twice(other)
        if t is None:
            raise TypeError(f"cannot compare HalfInteger with {type(other).__name__}")
        return t

    def __eq__(self, other):
        t = self._other_twice(other)
        if t is None:
            if isinstance(other, (Rational, Fraction)):
                return mpq(self.twice, 2) == other
            return NotImplemented
        return self.twice == t

    def __hash__(self):
        return hash(mpq(self.twice, 2))

    def __lt__(self, other):
        return self.twice < self._cmp_key(other)

    def __le__(self, other):
        return self.twice <= self._cmp_key(other)

    def __gt__(self, other):
        return self.twice > self._cmp_key(other)

    def __ge__(self, other):
        return self.twice >= self._cmp_key(other)

    def __str__(self):
        if self.twice % 2 == 0:
            return str(self.twice // 2)
        return f"{self.twice}/2"

    def __repr__(self):
        return f"HalfInteger({str(self)!r})"


def _half_from_twice(t: int) -> HalfInteger:
    obj = object.__new__(HalfInteger)
    object.__setattr__(obj, "twice", t)
    return obj


def random_gaussian(rng, bound: int = 3) -> GaussianRational:
    """Seeded random element ``(a + b i) / d`` with ``|a|, |b| <= bound`` and ``1 <= d <= 3``."""
    re = rng.randint(-bound, bound)
    im = rng.randint(-bound, bound)
    den = rng.randint(1, 3)
    return GaussianRational._raw(mpq(re, den), mpq(im, den))
