"""Polynomials and rational functions over the Gaussian rationals.

Everything lives in one global coordinate ``z`` on the Riemann sphere; the
point at infinity is reached through the chart ``w = 1/z``.  Rational
functions are kept in canonical form (coprime, monic denominator) so that
``==`` is structural equality.
"""
from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterable, Mapping

from .exactnum import ONE, ZERO, GaussianRational, as_gaussian

__all__ = [
    "INF",
    "Polynomial",
    "RationalFunction",
    "LaurentSeries",
    "as_point",
    "order_at",
    "local_expansion",
    "residue_at",
    "residue_of_product",
    "derivative",
    "schwarzian_derivative",
]


class _Infinity:
    """The point ∞ of the sphere (local chart ``w = 1/z``)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __reduce__(self):
        return (_Infinity, ())

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "oo"


INF = _Infinity()


def as_point(p):
    """Coerce to an extended point: a GaussianRational or :data:`INF`."""
    if p is INF or (isinstance(p, str) and p.strip().lower() in ("oo", "inf", "infinity", "∞")):
        return INF
    return as_gaussian(p)


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


def _strip(coeffs: list) -> tuple:
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


class Polynomial:
    """Dense univariate polynomial; ``coeffs[k]`` multiplies ``z**k``."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        if isinstance(coeffs, Mapping):
            items = {int(k): as_gaussian(v) for k, v in coeffs.items()}
            if any(k < 0 for k in items):
                raise ValueError("polynomial exponents must be non-negative")
            dense = [ZERO] * (max(items) + 1 if items else 0)
            for k, v in items.items():
                dense[k] = v
            coeffs = dense
        self.coeffs = _strip([as_gaussian(c) for c in coeffs])
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: tuple) -> "Polynomial":
        obj = object.__new__(cls)
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, c) -> "Polynomial":
        c = as_gaussian(c)
        return cls._raw((c,) if c else ())

    @classmethod
    def monomial(cls, k: int, c=ONE) -> "Polynomial":
        c = as_gaussian(c)
        if not c:
            return ZERO_POLY
        return cls._raw((ZERO,) * k + (c,))

    @classmethod
    def linear_factor(cls, a) -> "Polynomial":
        """``z - a``."""
        return cls._raw((-as_gaussian(a), ONE))

    # -- basic queries ----------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def leading(self) -> GaussianRational:
        return self.coeffs[-1] if self.coeffs else ZERO

    def lowest_order(self) -> int:
        """Index of the lowest nonzero coefficient (``math.inf`` for zero)."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return math.inf

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __call__(self, x):
        x = as_gaussian(x)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Polynomial._raw(_strip(out))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Polynomial":
        c = as_gaussian(c)
        if not c:
            return ZERO_POLY
        if c == ONE:
            return self
        return Polynomial._raw(tuple(x * c for x in self.coeffs))

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZERO_POLY
        if len(a) == 1:
            return other.scale(a[0])
        if len(b) == 1:
            return self.scale(b[0])
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
        return Polynomial._raw(_strip(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative polynomial power")
        result, base = ONE_POLY, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift_up(self, k: int) -> "Polynomial":
        """Multiply by ``z**k``."""
        if not self.coeffs or k == 0:
            return self
        return Polynomial._raw((ZERO,) * k + self.coeffs)

    def shift_down(self, k: int) -> "Polynomial":
        """Drop the ``k`` lowest coefficients (exact division by ``z**k`` when they vanish)."""
        return Polynomial._raw(self.coeffs[k:])

    def __divmod__(self, other: "Polynomial"):
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = len(other.coeffs) - 1
        if len(rem) - 1 < db:
            return ZERO_POLY, self
        lead_inv = other.coeffs[-1].inverse()
        monic = lead_inv == ONE
        quot = [ZERO] * (len(rem) - db)
        bc = other.coeffs
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if not c:
                continue
            q = c if monic else c * lead_inv
            quot[k - db] = q
            off = k - db
            for j in range(db):
                if bc[j]:
                    rem[off + j] = rem[off + j] - q * bc[j]
            rem[k] = ZERO
        return Polynomial._raw(_strip(quot)), Polynomial._raw(_strip(rem[:db]))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("polynomial division is not exact")
        return q

    def monic(self) -> "Polynomial":
        if not self.coeffs:
            return self
        return self.scale(self.coeffs[-1].inverse())

    def derivative(self) -> "Polynomial":
        return Polynomial._raw(_strip([c * k for k, c in enumerate(self.coeffs)][1:]))

    def taylor_shift(self, a) -> "Polynomial":
        """Coefficients of ``p(a + u)`` as a polynomial in ``u``."""
        a = as_gaussian(a)
        if not a or len(self.coeffs) <= 1:
            return self
        c = list(self.coeffs)
        n = len(c)
        for i in range(n - 1):
            for k in range(n - 2, i - 1, -1):
                c[k] = c[k] + a * c[k + 1]
        return Polynomial._raw(_strip(c))

    def reversed(self, n: int | None = None) -> "Polynomial":
        """``w**n * p(1/w)`` with ``n`` defaulting to the degree."""
        if n is None:
            n = self.degree
        if n < self.degree:
            raise ValueError("reversal length below degree")
        pad = list(self.coeffs) + [ZERO] * (n + 1 - len(self.coeffs))
        return Polynomial._raw(_strip(pad[::-1]))

    def to_dict(self) -> dict:
        return {str(k): str(c) for k, c in enumerate(self.coeffs) if c}

    @classmethod
    def from_dict(cls, d: Mapping) -> "Polynomial":
        return cls(d)

    def __repr__(self):
        if not self.coeffs:
            return "Polynomial(0)"
        return f"Polynomial({_poly_str(self)})"

    def __str__(self):
        return _poly_str(self)


def _poly_str(p: Polynomial, var: str = "z") -> str:
    if not p.coeffs:
        return "0"
    parts = []
    for k in range(len(p.coeffs) - 1, -1, -1):
        c = p.coeffs[k]
        if not c:
            continue
        cs = str(c)
        if not c.is_real() and c.re:
            cs = f"({cs})"
        if k == 0:
            parts.append(cs)
            continue
        mono = var if k == 1 else f"{var}^{k}"
        if c == ONE:
            parts.append(mono)
        elif c == -ONE:
            parts.append(f"-{mono}")
        else:
            parts.append(f"{cs}*{mono}")
    out = parts[0]
    for s in parts[1:]:
        out += s if s.startswith("-") else "+" + s
    return out


ZERO_POLY = Polynomial._raw(())
ONE_POLY = Polynomial._raw((ONE,))
Z_POLY = Polynomial._raw((ZERO, ONE))


def divide_out_root(p: Polynomial, a) -> tuple:
    """Strip every factor ``(z - a)`` from ``p``; returns ``(quotient, multiplicity)``."""
    a = as_gaussian(a)
    lin = Polynomial.linear_factor(a)
    mult = 0
    while p.degree > 0 and not p(a):
        p = p.exact_div(lin)
        mult += 1
    return p, mult


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic greatest common divisor (zero only if both inputs are zero)."""
    if not a.coeffs:
        return b.monic()
    if not b.coeffs:
        return a.monic()
    if len(a.coeffs) < len(b.coeffs):
        a, b = b, a
    a, b = a.monic(), b.monic()
    while b.coeffs:
        if len(b.coeffs) == 1:
            return ONE_POLY
        r = a % b
        a, b = b, r.monic()
    return a


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------


class RationalFunction:
    """``num/den`` with ``gcd(num, den) = 1`` and ``den`` monic."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=ZERO_POLY, den=ONE_POLY):
        if not isinstance(num, Polynomial):
            num = Polynomial.constant(num) if not isinstance(num, (list, tuple, dict)) else Polynomial(num)
        if not isinstance(den, Polynomial):
            den = Polynomial.constant(den) if not isinstance(den, (list, tuple, dict)) else Polynomial(den)
        if not den.coeffs:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num.coeffs:
            self.num, self.den = ZERO_POLY, ONE_POLY
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
            lead = den.coeffs[-1]
            if lead != ONE:
                inv = lead.inverse()
                num, den = num.scale(inv), den.scale(inv)
            self.num, self.den = num, den
        self._hash = None

    @classmethod
    def _raw(cls, num: Polynomial, den: Polynomial) -> "RationalFunction":
        """Trusted constructor: caller guarantees canonical form."""
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, c) -> "RationalFunction":
        return cls._raw(Polynomial.constant(c), ONE_POLY)

    @classmethod
    def z(cls) -> "RationalFunction":
        return cls._raw(Z_POLY, ONE_POLY)

    @classmethod
    def from_poly(cls, p: Polynomial) -> "RationalFunction":
        return cls._raw(p, ONE_POLY)

    @classmethod
    def from_factored(cls, c, exponents: Mapping) -> "RationalFunction":
        """``c * prod (z - a)**e`` over the given distinct points ``a``."""
        c = as_gaussian(c)
        if not c:
            return ZERO_RF
        num, den = Polynomial.constant(c), ONE_POLY
        for a, e in exponents.items():
            if e > 0:
                num = num * Polynomial.linear_factor(a) ** e
            elif e < 0:
                den = den * Polynomial.linear_factor(a) ** (-e)
        return cls._raw(num, den)

    # -- queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num.coeffs

    def __bool__(self):
        return bool(self.num.coeffs)

    def is_polynomial(self) -> bool:
        return len(self.den.coeffs) == 1

    def is_constant(self) -> bool:
        return len(self.den.coeffs) == 1 and len(self.num.coeffs) <= 1

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        try:
            other = as_gaussian(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.is_constant() and (self.num.coeffs[0] if self.num.coeffs else ZERO) == other

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __reduce__(self):
        return (RationalFunction._raw, (self.num, self.den))

    def __call__(self, x):
        x = as_gaussian(x)
        d = self.den(x)
        if not d:
            raise ZeroDivisionError(f"pole at {x}")
        return self.num(x) / d

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def _lift(other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction._raw(other, ONE_POLY)
        return RationalFunction.constant(other)

    def __add__(self, other):
        try:
            other = self._lift(other)
        except (TypeError, ValueError):
            return NotImplemented
        if not other.num.coeffs:
            return self
        if not self.num.coeffs:
            return other
        if self.den == other.den:
            if len(self.den.coeffs) == 1:
                return RationalFunction._raw(self.num + other.num, ONE_POLY)
            return RationalFunction(self.num + other.num, self.den)
        g = poly_gcd(self.den, other.den)
        if g.degree == 0:
            num = self.num * other.den + other.num * self.den
            return RationalFunction._raw(num, self.den * other.den) if num.coeffs else ZERO_RF
        d1 = self.den.exact_div(g)
        d2 = other.den.exact_div(g)
        num = self.num * d2 + other.num * d1
        return RationalFunction(num, d1 * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw(-self.num, self.den)

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "RationalFunction":
        c = as_gaussian(c)
        if not c:
            return ZERO_RF
        return RationalFunction._raw(self.num.scale(c), self.den)

    def __mul__(self, other):
        if not isinstance(other, (RationalFunction, Polynomial)):
            try:
                return self.scale(other)
            except (TypeError, ValueError):
                return NotImplemented
        other = self._lift(other)
        if not self.num.coeffs or not other.num.coeffs:
            return ZERO_RF
        a, b, c, d = self.num, self.den, other.num, other.den
        if len(b.coeffs) == 1 and len(d.coeffs) == 1:
            return RationalFunction._raw(a * c, ONE_POLY)
        g1 = poly_gcd(a, d) if len(d.coeffs) > 1 else ONE_POLY
        g2 = poly_gcd(c, b) if len(b.coeffs) > 1 else ONE_POLY
        if g1.degree > 0:
            a, d = a.exact_div(g1), d.exact_div(g1)
        if g2.degree > 0:
            c, b = c.exact_div(g2), b.exact_div(g2)
        return RationalFunction._raw(a * c, b * d)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if not self.num.coeffs:
            raise ZeroDivisionError("inverse of the zero rational function")
        lead = self.num.coeffs[-1].inverse()
        return RationalFunction._raw(self.den.scale(lead), self.num.scale(lead))

    def __truediv__(self, other):
        if not isinstance(other, (RationalFunction, Polynomial)):
            c = as_gaussian(other)
            return self.scale(c.inverse())
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction._raw(self.num ** k, self.den ** k) if k else ONE_RF

    def derivative(self) -> "RationalFunction":
        if len(self.den.coeffs) == 1:
            return RationalFunction._raw(self.num.derivative(), ONE_POLY)
        n, d = self.num, self.den
        num = n.derivative() * d - n * d.derivative()
        if not num.coeffs:
            return ZERO_RF
        # gcd(num, d**2) divides d * (squarefree-free part); reduce generically
        return RationalFunction(num, d * d)

    # -- formatting -------------------------------------------------------
    def __str__(self):
        if len(self.den.coeffs) == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RationalFunction({str(self)!r})"

    def to_dict(self) -> dict:
        return {"num": self.num.to_dict(), "den": self.den.to_dict()}

    @classmethod
    def from_dict(cls, d: Mapping) -> "RationalFunction":
        return cls(Polynomial(d.get("num", {})), Polynomial(d.get("den", {"0": "1"})))


ZERO_RF = RationalFunction._raw(ZERO_POLY, ONE_POLY)
ONE_RF = RationalFunction._raw(ONE_POLY, ONE_POLY)


def sum_of_products(pairs) -> RationalFunction:
    """``sum a*b`` over ``pairs`` with a single reduction at the end.

    Terms are grouped by their unreduced denominator, which is much cheaper
    than reducing after every addition when few denominators occur.
    """
    groups: dict = {}
    for a, b in pairs:
        if not a.num.coeffs or not b.num.coeffs:
            continue
        den = a.den * b.den if len(b.den.coeffs) > 1 else a.den
        if len(a.den.coeffs) == 1:
            den = b.den
        num = a.num * b.num
        groups[den] = groups[den] + num if den in groups else num
    groups = {d: n for d, n in groups.items() if n.coeffs}
    if not groups:
        return ZERO_RF
    if len(groups) == 1:
        (d, n), = groups.items()
        return RationalFunction(n, d)
    dens = list(groups)
    total_den = dens[0]
    for d in dens[1:]:
        g = poly_gcd(total_den, d)
        total_den = total_den * (d.exact_div(g) if g.degree > 0 else d)
    num = ZERO_POLY
    for d in dens:
        num = num + groups[d] * total_den.exact_div(d)
    return RationalFunction(num, total_den)


def derivative(f: RationalFunction) -> RationalFunction:
    """Exact derivative in the global coordinate."""
    return f.derivative()


def schwarzian_derivative(h: RationalFunction) -> RationalFunction:
    """``h'''/h' - 3/2 (h''/h')**2``; raises ``ValueError`` for constant ``h``."""
    h1 = h.derivative()
    if h1.is_zero():
        raise ValueError("Schwarzian derivative of a constant map is undefined")
    h2 = h1.derivative()
    h3 = h2.derivative()
    q = h2 / h1
    return h3 / h1 - (q * q).scale(GaussianRational(3, 0) / 2)


# ---------------------------------------------------------------------------
# Local expansions
# ---------------------------------------------------------------------------


class LaurentSeries:
    """Truncated Laurent series ``sum c_k t**k`` at ``base_point``.

    ``t`` is ``z - P`` at a finite point and ``w = 1/z`` at infinity.  The
    coefficients are exact for every exponent ``<= known_through``.
    """

    __slots__ = ("base_point", "coeffs", "known_through")

    def __init__(self, base_point, coeffs: Mapping[int, GaussianRational], known_through: int):
        self.base_point = base_point
        self.coeffs = {int(k): as_gaussian(v) for k, v in coeffs.items() if v and k <= known_through}
        self.known_through = int(known_through)

    @classmethod
    def _raw(cls, base_point, coeffs: dict, known_through: int) -> "LaurentSeries":
        obj = object.__new__(cls)
        obj.base_point = base_point
        obj.coeffs = coeffs
        obj.known_through = known_through
        return obj

    def valuation(self):
        """Lowest exponent with nonzero coefficient (``math.inf`` if none is known)."""
        return min(self.coeffs) if self.coeffs else math.inf

    def coefficient(self, k: int) -> GaussianRational:
        if k > self.known_through:
            raise ValueError(f"coefficient {k} beyond truncation order {self.known_through}")
        return self.coeffs.get(k, ZERO)

    def __getitem__(self, k: int) -> GaussianRational:
        return self.coefficient(k)

    def truncate(self, through: int) -> "LaurentSeries":
        through = min(through, self.known_through)
        return LaurentSeries._raw(
            self.base_point, {k: v for k, v in self.coeffs.items() if k <= through}, through
        )

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        t = min(self.known_through, other.known_through)
        out = {k: v for k, v in self.coeffs.items() if k <= t}
        for k, v in other.coeffs.items():
            if k <= t:
                s = out.get(k, ZERO) + v
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return LaurentSeries._raw(self.base_point, out, t)

    def __neg__(self):
        return LaurentSeries._raw(self.base_point, {k: -v for k, v in self.coeffs.items()}, self.known_through)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "LaurentSeries":
        c = as_gaussian(c)
        if not c:
            return LaurentSeries._raw(self.base_point, {}, self.known_through)
        return LaurentSeries._raw(self.base_point, {k: v * c for k, v in self.coeffs.items()}, self.known_through)

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            return self.scale(other)
        va, vb = self.valuation(), other.valuation()
        if va is math.inf or vb is math.inf:
            # zero known part: truncation order of the product is bounded below
            t = min(self.known_through + (vb if vb is not math.inf else other.known_through + 1),
                    other.known_through + (va if va is not math.inf else self.known_through + 1))
            return LaurentSeries._raw(self.base_point, {}, t)
        t = min(self.known_through + vb, other.known_through + va)
        out: dict = {}
        for i, x in self.coeffs.items():
            for j, y in other.coeffs.items():
                k = i + j
                if k <= t:
                    out[k] = out.get(k, ZERO) + x * y
        return LaurentSeries._raw(self.base_point, {k: v for k, v in out.items() if v}, t)

    __rmul__ = __mul__

    def derivative(self) -> "LaurentSeries":
        """Termwise derivative in the local coordinate ``t``."""
        return LaurentSeries._raw(
            self.base_point,
            {k - 1: v * k for k, v in self.coeffs.items() if k},
            self.known_through - 1,
        )

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.base_point is other.base_point or self.base_point == other.base_point) and \
            self.known_through == other.known_through and self.coeffs == other.coeffs

    def __repr__(self):
        terms = ", ".join(f"{k}: {v}" for k, v in sorted(self.coeffs.items()))
        return f"LaurentSeries(at={self.base_point}, {{{terms}}}, through={self.known_through})"


def _series_quotient(num: Polynomial, den: Polynomial, count: int) -> list:
    """First ``count`` power-series coefficients of ``num/den`` with ``den(0) != 0``."""
    d = den.coeffs
    n = num.coeffs
    d0_inv = d[0].inverse()
    unit = d0_inv == ONE
    out = []
    for k in range(count):
        acc = n[k] if k < len(n) else ZERO
        for j in range(1, min(k, len(d) - 1) + 1):
            if d[j]:
                acc = acc - d[j] * out[k - j]
        out.append(acc if unit else acc * d0_inv)
    return out


@lru_cache(maxsize=None)
def _local_parts(f: RationalFunction, point):
    """(valuation, reduced numerator, reduced denominator) in the local coordinate."""
    if point is INF:
        dn, dd = f.num.degree, f.den.degree
        return dd - dn, f.num.reversed(), f.den.reversed()
    nu = f.num.taylor_shift(point)
    du = f.den.taylor_shift(point)
    on, od = nu.lowest_order(), du.lowest_order()
    return on - od, nu.shift_down(on), du.shift_down(od)


@lru_cache(maxsize=200_000)
def local_expansion(f: RationalFunction, point, through: int) -> LaurentSeries:
    """Exact Laurent expansion of ``f`` at ``point`` through exponent ``through``."""
    point = as_point(point)
    if f.is_zero():
        return LaurentSeries._raw(point, {}, through)
    val, n, d = _local_parts(f, point)
    count = through - val + 1
    if count <= 0:
        return LaurentSeries._raw(point, {}, through)
    cs = _series_quotient(n, d, count)
    return LaurentSeries._raw(point, {val + k: c for k, c in enumerate(cs) if c}, through)


def order_at(f: RationalFunction, point):
    """Vanishing order of ``f`` at ``point`` (negative for poles, ``math.inf`` for 0)."""
    point = as_point(point)
    if f.is_zero():
        return math.inf
    if point is INF:
        return f.den.degree - f.num.degree
    return _local_parts(f, point)[0]


def residue_at(f: RationalFunction, point) -> GaussianRational:
    """Residue of the 1-form ``f dz`` at ``point``.

    At infinity this is the residue in the ``w``-chart, i.e. minus the
    coefficient of ``z**-1`` at infinity, so that all residues sum to zero.
    """
    point = as_point(point)
    if f.is_zero():
        return ZERO
    if point is INF:
        return -local_expansion(f, INF, 1).coefficient(1)
    if f.den(point):
        return ZERO
    return local_expansion(f, point, -1).coefficient(-1)


def residue_of_product(factors, point) -> GaussianRational:
    """Residue at a finite ``point`` of ``prod(factors) dz`` without forming the product."""
    point = as_point(point)
    if point is INF:
        prod = ONE_RF
        for f in factors:
            prod = prod * f
        return residue_at(prod, INF)
    factors = list(factors)
    if any(f.is_zero() for f in factors):
        return ZERO
    orders = [order_at(f, point) for f in factors]
    total = sum(orders)
    if total >= 0:
        return ZERO
    series = None
    for i, f in enumerate(factors):
        others = total - orders[i]
        s = local_expansion(f, point, -1 - others)
        series = s if series is None else series * s
    return series.coefficient(-1)
