"""Algebras built from forms: L, A, D¹, the superalgebra S, the Jordan superalgebra J
and current algebras over a finite-dimensional Lie algebra."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from .exactnum import ONE, ZERO, HalfInteger, as_gaussian
from .forms import (
    MeromorphicForm,
    WeightError,
    form_bracket,
    form_product,
    lie_derivative,
)
from .geometry import MarkedSphere
from .knbasis import basis_form
from .linsolve import (
    as_matrix,
    mat_commutator,
    mat_mul,
    mat_trace,
    mat_transpose,
    nullspace,
    solve,
)

__all__ = [
    "D1Element",
    "SuperElement",
    "JordanElement",
    "FiniteLieAlgebra",
    "CurrentElement",
    "AlgebraError",
    "d1_bracket",
    "d1_jacobi_defect",
    "super_bracket",
    "super_jacobi_defect",
    "jordan_product",
    "current_bracket",
    "current_jacobi_defect",
    "homogeneous_basis",
    "builtin_lie_algebra",
    "load_lie_algebra",
]

MINUS_HALF = HalfInteger("-1/2")


class AlgebraError(ValueError):
    """Malformed algebra data or an element of the wrong shape."""


def _zero(w) -> MeromorphicForm:
    return MeromorphicForm.zero(w)


def _expect(f: MeromorphicForm, w, what: str) -> MeromorphicForm:
    if f.weight != w and not f.is_zero():
        raise WeightError(f"{what} must have weight {w}, got {f.weight}")
    return f if f.weight == w else _zero(w)


# ---------------------------------------------------------------------------
# D¹ = A ⊕ L
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class D1Element:
    function_part: MeromorphicForm
    vector_part: MeromorphicForm

    def __post_init__(self):
        object.__setattr__(self, "function_part", _expect(self.function_part, 0, "function part"))
        object.__setattr__(self, "vector_part", _expect(self.vector_part, -1, "vector part"))

    def __add__(self, other):
        return D1Element(self.function_part + other.function_part, self.vector_part + other.vector_part)

    def __sub__(self, other):
        return D1Element(self.function_part - other.function_part, self.vector_part - other.vector_part)

    def scale(self, c):
        return D1Element(self.function_part.scale(c), self.vector_part.scale(c))

    def is_zero(self) -> bool:
        return self.function_part.is_zero() and self.vector_part.is_zero()


def d1_bracket(a: D1Element, b: D1Element) -> D1Element:
    """``[(g,e),(h,f)] = (e.h - f.g, [e,f])``."""
    g, e = a.function_part, a.vector_part
    h, f = b.function_part, b.vector_part
    return D1Element(lie_derivative(e, h) - lie_derivative(f, g), form_bracket(e, f))


def d1_jacobi_defect(a: D1Element, b: D1Element, c: D1Element) -> D1Element:
    br = d1_bracket
    return br(br(a, b), c) + br(br(b, c), a) + br(br(c, a), b)


# ---------------------------------------------------------------------------
# S = L ⊕ F^{-1/2}
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SuperElement:
    even_part: MeromorphicForm
    odd_part: MeromorphicForm

    def __post_init__(self):
        object.__setattr__(self, "even_part", _expect(self.even_part, -1, "even part"))
        object.__setattr__(self, "odd_part", _expect(self.odd_part, MINUS_HALF, "odd part"))

    @classmethod
    def even(cls, e: MeromorphicForm) -> "SuperElement":
        return cls(e, _zero(MINUS_HALF))

    @classmethod
    def odd(cls, phi: MeromorphicForm) -> "SuperElement":
        return cls(_zero(-1), phi)

    def __add__(self, other):
        return SuperElement(self.even_part + other.even_part, self.odd_part + other.odd_part)

    def __sub__(self, other):
        return SuperElement(self.even_part - other.even_part, self.odd_part - other.odd_part)

    def __neg__(self):
        return SuperElement(-self.even_part, -self.odd_part)

    def scale(self, c):
        return SuperElement(self.even_part.scale(c), self.odd_part.scale(c))

    def is_zero(self) -> bool:
        return self.even_part.is_zero() and self.odd_part.is_zero()

    @property
    def parity(self) -> int:
        """0 or 1 for homogeneous elements (zero counts as even)."""
        if self.odd_part.is_zero():
            return 0
        if self.even_part.is_zero():
            return 1
        raise AlgebraError("element is not homogeneous")


def super_bracket(a: SuperElement, b: SuperElement) -> SuperElement:
    """Bilinear extension of ``[e,f]``, ``[e,φ] = -[φ,e] = e.φ`` and ``[φ,ψ] = φ·ψ``.

    For ``a = (e, φ)`` and ``b = (f, ψ)`` this is ``([e,f] + φ·ψ, e.ψ - f.φ)``.
    """
    e, phi = a.even_part, a.odd_part
    f, psi = b.even_part, b.odd_part
    even = form_bracket(e, f) + form_product(phi, psi)
    odd = lie_derivative(e, psi) - lie_derivative(f, phi)
    return SuperElement(even, odd)


def super_jacobi_defect(a: SuperElement, b: SuperElement, c: SuperElement) -> SuperElement:
    """``(-1)^{āc̄}[a,[b,c]] + (-1)^{b̄ā}[b,[c,a]] + (-1)^{c̄b̄}[c,[a,b]]``."""
    pa, pb, pc = a.parity, b.parity, c.parity
    br = super_bracket
    t1 = br(a, br(b, c))
    t2 = br(b, br(c, a))
    t3 = br(c, br(a, b))
    if pa * pc:
        t1 = -t1
    if pb * pa:
        t2 = -t2
    if pc * pb:
        t3 = -t3
    return t1 + t2 + t3


# ---------------------------------------------------------------------------
# J = F^0 ⊕ F^{-1/2}
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JordanElement:
    even_part: MeromorphicForm
    odd_part: MeromorphicForm

    def __post_init__(self):
        object.__setattr__(self, "even_part", _expect(self.even_part, 0, "even part"))
        object.__setattr__(self, "odd_part", _expect(self.odd_part, MINUS_HALF, "odd part"))

    def __add__(self, other):
        return JordanElement(self.even_part + other.even_part, self.odd_part + other.odd_part)

    def is_zero(self) -> bool:
        return self.even_part.is_zero() and self.odd_part.is_zero()


def _as_jordan(x) -> JordanElement:
    if isinstance(x, JordanElement):
        return x
    if isinstance(x, MeromorphicForm):
        if x.weight == 0:
            return JordanElement(x, _zero(MINUS_HALF))
        if x.weight == MINUS_HALF:
            return JordanElement(_zero(0), x)
        raise WeightError(f"Jordan superalgebra has weights 0 and -1/2 only, got {x.weight}")
    raise TypeError(f"not a Jordan element: {x!r}")


def jordan_product(a, b, antialgebra: bool = False) -> JordanElement:
    """``f∘g = f·g``, ``f∘φ = φ∘f = f·φ`` and ``φ∘ψ = [φ,ψ]``.

    With ``antialgebra=True`` the mixed product is halved.
    """
    a, b = _as_jordan(a), _as_jordan(b)
    f, phi = a.even_part, a.odd_part
    g, psi = b.even_part, b.odd_part
    even = form_product(f, g) + form_bracket(phi, psi)
    mixed = form_product(f, psi) + form_product(g, phi)
    if antialgebra:
        mixed = mixed.scale(HalfInteger("1/2").as_rational())
    return JordanElement(even, mixed)


# ---------------------------------------------------------------------------
# Finite-dimensional Lie algebras
# ---------------------------------------------------------------------------


@dataclass
class FiniteLieAlgebra:
    """Lie algebra given by structure constants ``[x_i, x_j] = sum_k c_ij^k x_k``."""

    dimension: int
    structure_constants: dict
    beta: tuple
    names: tuple = ()
    matrices: tuple = ()  # optional faithful matrix realization of the basis
    label: str = ""

    def __post_init__(self):
        self.beta = as_matrix(self.beta)
        self.structure_constants = {
            (int(i), int(j)): {int(k): as_gaussian(c) for k, c in terms.items() if as_gaussian(c)}
            for (i, j), terms in self.structure_constants.items()
        }
        if not self.names:
            self.names = tuple(f"x{i}" for i in range(self.dimension))

    def bracket_basis(self, i: int, j: int) -> dict:
        return self.structure_constants.get((i, j), {})

    def bracket(self, x: Sequence, y: Sequence) -> list:
        """Bracket of coordinate vectors."""
        out = [ZERO] * self.dimension
        for (i, j), terms in self.structure_constants.items():
            if x[i] and y[j]:
                c = as_gaussian(x[i]) * as_gaussian(y[j])
                for k, v in terms.items():
                    out[k] = out[k] + c * v
        return out

    def form(self, x: Sequence, y: Sequence):
        acc = ZERO
        for i in range(self.dimension):
            if x[i]:
                for j in range(self.dimension):
                    if y[j] and self.beta[i][j]:
                        acc = acc + as_gaussian(x[i]) * as_gaussian(y[j]) * self.beta[i][j]
        return acc

    def validation_errors(self) -> list:
        """Failures of antisymmetry, Jacobi, symmetry or invariance of β."""
        d = self.dimension
        errs = []
        unit = [[ONE if k == i else ZERO for k in range(d)] for i in range(d)]
        br = [[self.bracket(unit[i], unit[j]) for j in range(d)] for i in range(d)]
        for i in range(d):
            for j in range(d):
                if any(a + b for a, b in zip(br[i][j], br[j][i])):
                    errs.append(f"antisymmetry fails for ({i},{j})")
                if self.beta[i][j] != self.beta[j][i]:
                    errs.append(f"beta not symmetric at ({i},{j})")
        for i, j, k in itertools.product(range(d), repeat=3):
            jac = [
                a + b + c
                for a, b, c in zip(
                    self.bracket(br[i][j], unit[k]),
                    self.bracket(br[j][k], unit[i]),
                    self.bracket(br[k][i], unit[j]),
                )
            ]
            if any(jac):
                errs.append(f"Jacobi fails for ({i},{j},{k})")
            if self.form(br[i][j], unit[k]) != self.form(unit[i], br[j][k]):
                errs.append(f"beta not invariant for ({i},{j},{k})")
        return errs

    def to_dict(self) -> dict:
        return {
            "name": self.label,
            "dimension": self.dimension,
            "names": list(self.names),
            "structure_constants": [
                {"i": i, "j": j, "k": k, "c": str(c)}
                for (i, j), terms in sorted(self.structure_constants.items())
                for k, c in sorted(terms.items())
            ],
            "beta": [[str(x) for x in row] for row in self.beta],
        }


def _from_matrices(label: str, mats: list, names=None) -> FiniteLieAlgebra:
    mats = [as_matrix(m) for m in mats]
    flat = [[x for row in m for x in row] for m in mats]
    A = [list(col) for col in zip(*flat)]  # columns are basis matrices
    sc = {}
    for i, a in enumerate(mats):
        for j, b in enumerate(mats):
            target = [x for row in mat_commutator(a, b) for x in row]
            if not any(target):
                continue
            coords = solve(A, target)
            if coords is None:
                raise AlgebraError(f"{label}: basis is not closed under the commutator")
            sc[(i, j)] = {k: c for k, c in enumerate(coords) if c}
    beta = tuple(tuple(mat_trace(mat_mul(a, b)) for b in mats) for a in mats)
    return FiniteLieAlgebra(len(mats), sc, beta, tuple(names or ()), tuple(mats), label)


def _unit(n: int, i: int, j: int):
    return [[ONE if (r, c) == (i, j) else ZERO for c in range(n)] for r in range(n)]


def _symplectic_form(n2: int):
    n = n2 // 2
    return [
        [ONE if c == r + n else (-ONE if r == c + n else ZERO) for c in range(n2)]
        for r in range(n2)
    ]


def _kernel_basis(n: int, constraint) -> list:
    """Matrices X (n×n) in the kernel of a linear map given on unit matrices."""
    cols = []
    for i in range(n):
        for j in range(n):
            img = constraint(as_matrix(_unit(n, i, j)))
            cols.append([x for row in img for x in row])
    A = [list(r) for r in zip(*cols)]
    out = []
    for v in nullspace(A, n * n):
        out.append([[v[i * n + j] for j in range(n)] for i in range(n)])
    return out


def builtin_lie_algebra(name: str) -> FiniteLieAlgebra:
    """``sl2``, ``gl<n>``, ``sl<n>``, ``so<n>``, ``sp<2n>`` or ``abelian<d>``."""
    key = name.lower().replace("(", "").replace(")", "").replace("_", "")
    if key == "sl2":
        e = [[0, 1], [0, 0]]
        f = [[0, 0], [1, 0]]
        h = [[1, 0], [0, -1]]
        return _from_matrices("sl2", [e, f, h], ("e", "f", "h"))
    for prefix in ("abelian", "gl", "sl", "so", "sp"):
        if key.startswith(prefix) and key[len(prefix):].isdigit():
            n = int(key[len(prefix):])
            break
    else:
        raise AlgebraError(f"unknown Lie algebra {name!r}")
    if n < 1:
        raise AlgebraError("size must be positive")
    if prefix == "abelian":
        return FiniteLieAlgebra(n, {}, tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)),
                                label=f"abelian{n}")
    if prefix == "gl":
        mats = [_unit(n, i, j) for i in range(n) for j in range(n)]
        names = [f"E{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    elif prefix == "sl":
        if n < 2:
            raise AlgebraError("sl(n) needs n >= 2")
        mats = [_unit(n, i, j) for i in range(n) for j in range(n) if i != j]
        names = [f"E{i + 1}{j + 1}" for i in range(n) for j in range(n) if i != j]
        for i in range(n - 1):
            h = _unit(n, i, i)
            h[i + 1][i + 1] = -ONE
            mats.append(h)
            names.append(f"H{i + 1}")
    elif prefix == "so":
        if n < 2:
            raise AlgebraError("so(n) needs n >= 2")
        mats, names = [], []
        for i in range(n):
            for j in range(i + 1, n):
                m = _unit(n, i, j)
                m[j][i] = -ONE
                mats.append(m)
                names.append(f"A{i + 1}{j + 1}")
    else:
        if n % 2:
            raise AlgebraError("sp needs an even size")
        sigma = as_matrix(_symplectic_form(n))
        mats = _kernel_basis(n, lambda X: [
            [a + b for a, b in zip(ra, rb)]
            for ra, rb in zip(mat_mul(mat_transpose(X), sigma), mat_mul(sigma, X))
        ])
        names = [f"S{k}" for k in range(len(mats))]
    return _from_matrices(f"{prefix}{n}", mats, names)


def lie_algebra_from_dict(d: Mapping) -> FiniteLieAlgebra:
    try:
        dim = int(d["dimension"])
        sc: dict = {}
        for entry in d.get("structure_constants", []):
            i, j, k = int(entry["i"]), int(entry["j"]), int(entry["k"])
            if not all(0 <= x < dim for x in (i, j, k)):
                raise AlgebraError(f"index out of range in {entry}")
            sc.setdefault((i, j), {})[k] = as_gaussian(str(entry["c"]))
        beta = d.get("beta") or [[ONE if i == j else ZERO for j in range(dim)] for i in range(dim)]
        beta = [[as_gaussian(str(x)) for x in row] for row in beta]
        if len(beta) != dim or any(len(r) != dim for r in beta):
            raise AlgebraError("beta must be a dim × dim matrix")
        alg = FiniteLieAlgebra(dim, sc, beta, tuple(d.get("names", ())), label=str(d.get("name", "")))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, AlgebraError):
            raise
        raise AlgebraError(f"bad Lie algebra data: {exc}") from exc
    errs = alg.validation_errors()
    if errs:
        raise AlgebraError("; ".join(errs[:5]))
    return alg


def load_lie_algebra(spec: str) -> FiniteLieAlgebra:
    """Built-in name or path to a JSON file."""
    p = Path(spec)
    if p.suffix == ".json" or p.exists():
        try:
            data = json.loads(p.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise AlgebraError(f"cannot read Lie algebra {spec}: {exc}") from exc
        return lie_algebra_from_dict(data)
    return builtin_lie_algebra(spec)


# ---------------------------------------------------------------------------
# Current algebra 𝔤 ⊗ A
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CurrentElement:
    """``sum_i x_i ⊗ f_i`` stored as ``{i: f_i}``."""

    components: Mapping = field(default_factory=dict)

    def __post_init__(self):
        comps = {}
        for i, f in dict(self.components).items():
            _expect(f, 0, "current coefficient")
            if not f.is_zero():
                comps[int(i)] = f
        object.__setattr__(self, "components", comps)

    def __add__(self, other):
        out = dict(self.components)
        for i, f in other.components.items():
            out[i] = out[i] + f if i in out else f
        return CurrentElement(out)

    def __neg__(self):
        return CurrentElement({i: -f for i, f in self.components.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return CurrentElement({i: f.scale(c) for i, f in self.components.items()})

    def is_zero(self) -> bool:
        return not self.components

    def __eq__(self, other):
        if not isinstance(other, CurrentElement):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(frozenset(self.components.items()))


def current_bracket(a: CurrentElement, b: CurrentElement, g: FiniteLieAlgebra) -> CurrentElement:
    """``[x ⊗ f, y ⊗ h] = [x, y] ⊗ f·h`` extended bilinearly."""
    out: dict = {}
    for i, f in a.components.items():
        for j, h in b.components.items():
            terms = g.bracket_basis(i, j)
            if not terms:
                continue
            fh = form_product(f, h)
            for k, c in terms.items():
                t = fh.scale(c)
                out[k] = out[k] + t if k in out else t
    return CurrentElement(out)


def current_jacobi_defect(a, b, c, g: FiniteLieAlgebra) -> CurrentElement:
    br = lambda x, y: current_bracket(x, y, g)  # noqa: E731
    return br(br(a, b), c) + br(br(b, c), a) + br(br(c, a), b)


# ---------------------------------------------------------------------------
# Homogeneous bases
# ---------------------------------------------------------------------------


def homogeneous_basis(kind: str, n, geom: MarkedSphere, lie: FiniteLieAlgebra | None = None) -> list:
    """Basis of the degree-``n`` piece of ``L``, ``A``, ``D1``, ``S``, ``J`` or ``current``.

    ``S_n`` and ``J_n`` pair the integral-degree even part with the odd
    ``-1/2``-forms of degree ``n + 1/2``.
    """
    K = geom.K
    n = n if isinstance(n, HalfInteger) else HalfInteger(n)
    if not n.is_integer:
        raise ValueError("homogeneous pieces are indexed by integers")
    half = n + HalfInteger("1/2")
    if kind == "L":
        return [basis_form(-1, n, p, geom) for p in range(1, K + 1)]
    if kind == "A":
        return [basis_form(0, n, p, geom) for p in range(1, K + 1)]
    if kind == "D1":
        return [D1Element(basis_form(0, n, p, geom), _zero(-1)) for p in range(1, K + 1)] + [
            D1Element(_zero(0), basis_form(-1, n, p, geom)) for p in range(1, K + 1)
        ]
    if kind == "S":
        return [SuperElement.even(basis_form(-1, n, p, geom)) for p in range(1, K + 1)] + [
            SuperElement.odd(basis_form(MINUS_HALF, half, p, geom)) for p in range(1, K + 1)
        ]
    if kind == "J":
        return [JordanElement(basis_form(0, n, p, geom), _zero(MINUS_HALF)) for p in range(1, K + 1)] + [
            JordanElement(_zero(0), basis_form(MINUS_HALF, half, p, geom)) for p in range(1, K + 1)
        ]
    if kind == "current":
        if lie is None:
            raise ValueError("current algebra needs a Lie algebra")
        return [
            CurrentElement({i: basis_form(0, n, p, geom)})
            for i in range(lie.dimension)
            for p in range(1, K + 1)
        ]
    raise ValueError(f"unknown algebra kind {kind!r}")
