"""Lax operator algebras on the marked sphere.

Elements are matrices of rational functions in ``z`` with at most simple
poles (double for ``sp``) at the Tyurin points ``γ_s`` and prescribed
expansion data there; the local coordinate at ``γ_s`` is ``w_s = z - γ_s``.
"""
from __future__ import annotations

import random
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Sequence

from .algebras import (
    CurrentElement,
    FiniteLieAlgebra,
    _from_matrices,
    _kernel_basis,
    _symplectic_form,
    builtin_lie_algebra,
    current_bracket,
)
from .exactnum import ONE, ZERO, GaussianRational, as_gaussian, random_gaussian as random_scalar
from .forms import MeromorphicForm
from .geometry import MarkedSphere
from .linsolve import as_matrix, mat_mul, mat_transpose, solve
from .ratfunc import (
    ONE_POLY,
    ZERO_RF,
    Polynomial,
    RationalFunction,
    divide_out_root,
    local_expansion,
    order_at,
    sum_of_products,
)

__all__ = [
    "MATRIX_TYPES",
    "LaxError",
    "TyurinData",
    "LaxElement",
    "LaxDiagnostics",
    "matrix_lie_algebra",
    "is_lax_element",
    "make_lax_element",
    "random_tyurin_data",
    "random_lax_element",
    "lax_bracket",
    "lax_product",
    "to_current",
    "from_current",
]

MATRIX_TYPES = ("gl", "sl", "so", "sp")


class LaxError(ValueError):
    """Invalid Tyurin data or inconsistent construction parameters."""


# ---------------------------------------------------------------------------
# helpers on vectors and rational matrices
# ---------------------------------------------------------------------------


def _dot(u, v):
    acc = ZERO
    for a, b in zip(u, v):
        acc = acc + a * b
    return acc


def _matvec(M, v):
    return tuple(_dot(row, v) for row in M)


def _outer(u, v):
    return tuple(tuple(a * b for b in v) for a in u)


def _rf_matrix(M) -> tuple:
    return tuple(tuple(RationalFunction.constant(x) if not isinstance(x, RationalFunction) else x for x in row)
                 for row in M)


def _rf_add(A, B):
    return tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def _rf_sub(A, B):
    return tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def _rf_commutator(A, B):
    n = len(A)
    neg = [[-x for x in row] for row in B]
    return tuple(
        tuple(
            sum_of_products([(A[i][k], B[k][j]) for k in range(n)] + [(neg[i][k], A[k][j]) for k in range(n)])
            for j in range(n)
        )
        for i in range(n)
    )


def _rf_mul(A, B):
    n, m = len(A), len(B[0])
    return tuple(
        tuple(sum_of_products((A[i][k], B[k][j]) for k in range(len(B))) for j in range(m))
        for i in range(n)
    )


def _rf_scale_const(M, f: RationalFunction):
    """Constant matrix ``M`` times the scalar function ``f``."""
    return tuple(tuple(f.scale(x) if x else ZERO_RF for x in row) for row in M)


def _rf_transpose(A):
    return tuple(zip(*A))


def _is_zero_matrix(M) -> bool:
    return all(not x for row in M for x in row)


# ---------------------------------------------------------------------------
# Tyurin data
# ---------------------------------------------------------------------------


def _parse_type(matrix_type: str, size: int | None):
    t = matrix_type.lower().replace("(", "").replace(")", "")
    for prefix in MATRIX_TYPES:
        if t.startswith(prefix):
            rest = t[len(prefix):]
            if rest:
                if not rest.isdigit():
                    break
                n = int(rest)
                if size is not None and size != n:
                    raise LaxError(f"size {size} does not match type {matrix_type}")
                return prefix, n
            if size is None:
                raise LaxError("matrix size missing")
            return prefix, int(size)
    raise LaxError(f"unknown matrix type {matrix_type!r}; expected gl/sl/so/sp")


@lru_cache(maxsize=None)
def matrix_lie_algebra(kind: str, size: int, sigma=None) -> FiniteLieAlgebra:
    """The matrix Lie algebra of the given kind, ``sp`` relative to ``sigma``."""
    if kind != "sp" or sigma is None:
        return builtin_lie_algebra(f"{kind}{size}")
    sig = as_matrix(sigma)
    mats = _kernel_basis(size, lambda X: [
        [a + b for a, b in zip(ra, rb)]
        for ra, rb in zip(mat_mul(mat_transpose(X), sig), mat_mul(sig, X))
    ])
    return _from_matrices(f"sp{size}", mats)


@dataclass(frozen=True)
class TyurinData:
    """Points ``γ_s`` with vectors ``α_s`` for a matrix type ``gl/sl/so/sp`` of size ``size``."""

    matrix_type: str
    size: int
    points: tuple
    sigma: tuple | None = None

    def __post_init__(self):
        kind, n = _parse_type(self.matrix_type, self.size)
        object.__setattr__(self, "matrix_type", kind)
        object.__setattr__(self, "size", n)
        pts = []
        for gamma, alpha in self.points:
            a = tuple(as_gaussian(x) for x in alpha)
            if len(a) != n:
                raise LaxError(f"α has length {len(a)}, expected {n}")
            pts.append((as_gaussian(gamma), a))
        gammas = [g for g, _ in pts]
        if len(set(gammas)) != len(gammas):
            raise LaxError("Tyurin points must be distinct")
        object.__setattr__(self, "points", tuple(pts))
        if kind == "sp":
            if n % 2:
                raise LaxError("sp needs an even size")
            sig = as_matrix(self.sigma if self.sigma is not None else _symplectic_form(n))
            if any(sig[i][j] != -sig[j][i] for i in range(n) for j in range(n)):
                raise LaxError("σ must be skew-symmetric")
            if _rank_deficient(sig):
                raise LaxError("σ must be nondegenerate")
            object.__setattr__(self, "sigma", sig)
        elif self.sigma is not None:
            raise LaxError("σ is only used for sp")
        if kind == "so":
            for g, a in pts:
                if _dot(a, a):
                    raise LaxError(f"so: α at {g} is not isotropic (αᵗα ≠ 0)")

    def check(self, geom: MarkedSphere) -> None:
        for g, _ in self.points:
            if g in geom.in_points:
                raise LaxError(f"Tyurin point {g} coincides with an in-point")

    @property
    def lie(self) -> FiniteLieAlgebra:
        return matrix_lie_algebra(self.matrix_type, self.size, self.sigma)

    def with_zero_alphas(self) -> "TyurinData":
        zero = tuple(ZERO for _ in range(self.size))
        return TyurinData(self.matrix_type, self.size, tuple((g, zero) for g, _ in self.points), self.sigma)

    def to_dict(self) -> dict:
        d = {
            "type": self.matrix_type,
            "size": self.size,
            "points": [{"gamma": str(g), "alpha": [str(x) for x in a]} for g, a in self.points],
        }
        if self.sigma is not None:
            d["sigma"] = [[str(x) for x in row] for row in self.sigma]
        return d

    @classmethod
    def from_dict(cls, d) -> "TyurinData":
        try:
            pts = tuple((as_gaussian(str(p["gamma"])), tuple(as_gaussian(str(x)) for x in p["alpha"]))
                        for p in d["points"])
            sigma = d.get("sigma")
            if sigma is not None:
                sigma = [[as_gaussian(str(x)) for x in row] for row in sigma]
            return cls(str(d["type"]), d.get("size"), pts, sigma)
        except (KeyError, TypeError) as exc:
            raise LaxError(f"bad Tyurin data: {exc}") from exc


def _rank_deficient(M) -> bool:
    from .linsolve import rank

    return rank(M) < len(M)


# ---------------------------------------------------------------------------
# elements and membership
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LaxElement:
    entries: tuple
    tyurin: TyurinData

    def __post_init__(self):
        n = self.tyurin.size
        m = _rf_matrix(self.entries)
        if len(m) != n or any(len(r) != n for r in m):
            raise LaxError(f"expected a {n}×{n} matrix")
        object.__setattr__(self, "entries", m)

    def to_dict(self) -> dict:
        return {"entries": [[str(x) for x in row] for row in self.entries]}


@dataclass
class LaxDiagnostics:
    violations: list = field(default_factory=list)
    certificates: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.valid

    def fail(self, point, tag: str, detail: str = ""):
        self.violations.append({"point": None if point is None else str(point), "constraint": tag, "detail": detail})


def _coefficients(L, gamma, lowest: int, highest: int):
    """``{k: L_{s,k}}`` for ``lowest <= k <= highest`` at ``gamma``."""
    n = len(L)
    out = {k: [[ZERO] * n for _ in range(n)] for k in range(lowest, highest + 1)}
    for i in range(n):
        for j in range(n):
            f = L[i][j]
            if f.is_zero():
                continue
            s = local_expansion(f, gamma, highest)
            for k, c in s.coeffs.items():
                if k < lowest:
                    raise ArithmeticError("pole order too high")
                out[k][i][j] = c
    return {k: tuple(tuple(r) for r in M) for k, M in out.items()}


def _check_global(L, T: TyurinData, geom: MarkedSphere, diag: LaxDiagnostics):
    n = T.size
    kind = T.matrix_type
    allowed = list(geom.in_points) + [g for g, _ in T.points]
    for i in range(n):
        for j in range(n):
            rest = L[i][j].den
            for P in allowed:
                rest = divide_out_root(rest, P)[0]
            if rest.degree > 0:
                diag.fail(None, "holomorphic outside W ∪ A", f"entry ({i},{j}) has poles at roots of {rest}")
    if kind == "sl":
        tr = ZERO_RF
        for i in range(n):
            tr = tr + L[i][i]
        if not tr.is_zero():
            diag.fail(None, "tr(L) = 0", f"trace is {tr}")
    elif kind == "so":
        for i in range(n):
            for j in range(i, n):
                if not (L[i][j] + L[j][i]).is_zero():
                    diag.fail(None, "L + Lᵗ = 0", f"entry ({i},{j})")
    elif kind == "sp":
        sig = _rf_matrix(T.sigma)
        S = _rf_add(_rf_mul(_rf_transpose(L), sig), _rf_mul(sig, L))
        if any(not x.is_zero() for row in S for x in row):
            diag.fail(None, "Lᵗσ + σL = 0", "matrix is not in sp")


def _first_nonzero(a):
    for i, x in enumerate(a):
        if x:
            return i
    return None


def _eigen_check(L0, alpha, gamma, diag, certs):
    i0 = _first_nonzero(alpha)
    if i0 is None:
        return
    v = _matvec(L0, alpha)
    kappa = v[i0] / alpha[i0]
    if any(x != kappa * a for x, a in zip(v, alpha)):
        diag.fail(gamma, "L_{s,0}α ≠ κα", "α is not an eigenvector of L_{s,0}")
    else:
        certs["kappa"] = str(kappa)


def _solve_beta(M, alpha, build, n):
    """Find β with ``build(α, β) == M`` (linear in β) by an exact solve."""
    cols = []
    for k in range(n):
        e = tuple(ONE if j == k else ZERO for j in range(n))
        img = build(alpha, e)
        cols.append([x for row in img for x in row])
    A = [list(r) for r in zip(*cols)]
    b = [x for row in M for x in row]
    return solve(A, b)


def is_lax_element(L, T: TyurinData, geom: MarkedSphere) -> LaxDiagnostics:
    """Check the expansion constraints of the matrix type at every Tyurin point."""
    entries = L.entries if isinstance(L, LaxElement) else _rf_matrix(L)
    T.check(geom)
    diag = LaxDiagnostics()
    _check_global(entries, T, geom, diag)
    n, kind = T.size, T.matrix_type
    for gamma, alpha in T.points:
        certs = {"point": str(gamma)}
        low = -2 if kind == "sp" else -1
        high = 1 if kind == "sp" else 0
        worst = min((order_at(f, gamma) for row in entries for f in row if not f.is_zero()), default=0)
        if worst < low:
            diag.fail(gamma, "pole order", f"order {worst} below {low}")
            continue
        C = _coefficients(entries, gamma, low, high)
        zero_alpha = _first_nonzero(alpha) is None
        if kind in ("gl", "sl"):
            M = C[-1]
            if zero_alpha:
                if not _is_zero_matrix(M):
                    diag.fail(gamma, "L_{s,-1} = αβᵗ", "α = 0 but L has a pole")
            else:
                beta = _solve_beta(M, alpha, lambda a, b: _outer(a, b), n)
                if beta is None:
                    diag.fail(gamma, "L_{s,-1} = αβᵗ", "residue is not of the form αβᵗ")
                elif _dot(beta, alpha):
                    diag.fail(gamma, "βᵗα = 0", f"βᵗα = {_dot(beta, alpha)}")
                else:
                    certs["beta"] = [str(x) for x in beta]
            _eigen_check(C[0], alpha, gamma, diag, certs)
        elif kind == "so":
            M = C[-1]
            if zero_alpha:
                if not _is_zero_matrix(M):
                    diag.fail(gamma, "L_{s,-1} = αβᵗ - βαᵗ", "α = 0 but L has a pole")
            else:
                build = lambda a, b: tuple(  # noqa: E731
                    tuple(x - y for x, y in zip(r1, r2)) for r1, r2 in zip(_outer(a, b), _outer(b, a))
                )
                beta = _solve_beta(M, alpha, build, n)
                if beta is None:
                    diag.fail(gamma, "L_{s,-1} = αβᵗ - βαᵗ", "residue has the wrong shape")
                elif _dot(beta, alpha):
                    diag.fail(gamma, "βᵗα = 0", f"βᵗα = {_dot(beta, alpha)}")
                else:
                    certs["beta"] = [str(x) for x in beta]
            _eigen_check(C[0], alpha, gamma, diag, certs)
        else:
            sig = T.sigma
            if zero_alpha:
                if not (_is_zero_matrix(C[-2]) and _is_zero_matrix(C[-1])):
                    diag.fail(gamma, "L_{s,-2} = L_{s,-1} = 0", "α = 0 but L has a pole")
            else:
                aas = mat_mul(_outer(alpha, alpha), sig)
                nu = _solve_beta(C[-2], alpha, lambda a, b: tuple(tuple(x * b[0] for x in r) for r in aas), 1)
                if nu is None:
                    diag.fail(gamma, "L_{s,-2} = ν ααᵗσ", "leading coefficient has the wrong shape")
                else:
                    certs["nu"] = str(nu[0])
                build = lambda a, b: mat_mul(  # noqa: E731
                    tuple(tuple(x + y for x, y in zip(r1, r2)) for r1, r2 in zip(_outer(a, b), _outer(b, a))), sig
                )
                beta = _solve_beta(C[-1], alpha, build, n)
                if beta is None:
                    diag.fail(gamma, "L_{s,-1} = (αβᵗ + βαᵗ)σ", "residue has the wrong shape")
                elif _dot(beta, _matvec(sig, alpha)):
                    diag.fail(gamma, "βᵗσα = 0", f"βᵗσα = {_dot(beta, _matvec(sig, alpha))}")
                else:
                    certs["beta"] = [str(x) for x in beta]
                _eigen_check(C[0], alpha, gamma, diag, certs)
                val = _dot(alpha, _matvec(sig, _matvec(C[1], alpha)))
                if val:
                    diag.fail(gamma, "αᵗσL_{s,1}α = 0", f"value {val}")
        diag.certificates.append(certs)
    return diag


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------


def _hermite_basis(gammas: Sequence, derivative: bool) -> tuple:
    """Polynomials ``ℓ_s`` (value δ_st, zero slope) and ``m_s`` (zero value, slope δ_st).

    Without ``derivative`` only the Lagrange polynomials are returned.
    """
    R = len(gammas)
    conds = 2 * R if derivative else R
    ell, emm = [], []
    for s in range(R):
        for want_slope in ((False, True) if derivative else (False,)):
            A, b = [], []
            for t, g in enumerate(gammas):
                A.append([g ** k if k else ONE for k in range(conds)])
                b.append(ONE if (t == s and not want_slope) else ZERO)
                if derivative:
                    A.append([g ** (k - 1) * k if k > 1 else (ONE if k == 1 else ZERO) for k in range(conds)])
                    b.append(ONE if (t == s and want_slope) else ZERO)
            c = solve(A, b)
            (emm if want_slope else ell).append(RationalFunction.from_poly(Polynomial(c)))
    return ell, emm


def _expansion_at(entries, gamma, k: int):
    return _coefficients(entries, gamma, -2, k)[k]


def _lie_coords_solve(images, rhs):
    """Coordinates ``c`` with ``sum c_i images[i] = rhs``."""
    A = [list(r) for r in zip(*images)]
    return solve(A, rhs)


def make_lax_element(T: TyurinData, geom: MarkedSphere, params: dict | None = None,
                     tail=None, rng: random.Random | None = None) -> LaxElement:
    """Build an element from singular data ``params`` and a holomorphic ``tail``.

    ``params`` maps each Tyurin point index to ``{"beta", "kappa", "nu"}``.
    The tail is a 𝔤-valued matrix of rational functions holomorphic at W
    (default: zero).  Constant corrections ``G_s ℓ_s(z)`` (and ``H_s m_s(z)``
    for ``sp``) are then solved exactly to impose the eigenvector and
    ``L_{s,1}`` conditions.
    """
    T.check(geom)
    n, kind = T.size, T.matrix_type
    params = params or {}
    lie = T.lie
    basis = lie.matrices
    L = _rf_matrix(tail) if tail is not None else tuple(tuple(ZERO_RF for _ in range(n)) for _ in range(n))
    sig = T.sigma
    gammas = [g for g, _ in T.points]
    for s, (gamma, alpha) in enumerate(T.points):
        p = params.get(s, {})
        if _first_nonzero(alpha) is None:
            continue
        beta = tuple(as_gaussian(x) for x in p.get("beta", [0] * n))
        w1 = RationalFunction.from_factored(ONE, {gamma: -1})
        if kind in ("gl", "sl"):
            if _dot(beta, alpha):
                raise LaxError(f"βᵗα = 0 violated at point {gamma}")
            L = _rf_add(L, _rf_scale_const(_outer(alpha, beta), w1))
        elif kind == "so":
            if _dot(beta, alpha):
                raise LaxError(f"βᵗα = 0 violated at point {gamma}")
            M = tuple(tuple(x - y for x, y in zip(r1, r2)) for r1, r2 in zip(_outer(alpha, beta), _outer(beta, alpha)))
            L = _rf_add(L, _rf_scale_const(M, w1))
        else:
            if _dot(beta, _matvec(sig, alpha)):
                raise LaxError(f"βᵗσα = 0 violated at point {gamma}")
            nu = as_gaussian(p.get("nu", 0))
            w2 = RationalFunction.from_factored(ONE, {gamma: -2})
            M2 = mat_mul(_outer(alpha, alpha), sig)
            M1 = mat_mul(tuple(tuple(x + y for x, y in zip(r1, r2))
                               for r1, r2 in zip(_outer(alpha, beta), _outer(beta, alpha))), sig)
            L = _rf_add(L, _rf_add(_rf_scale_const(M2, w2.scale(nu)), _rf_scale_const(M1, w1)))
    if gammas:
        ell, emm = _hermite_basis(gammas, derivative=(kind == "sp"))
        for s, (gamma, alpha) in enumerate(T.points):
            if _first_nonzero(alpha) is None:
                continue
            kappa = as_gaussian(params.get(s, {}).get("kappa", 0))
            C0 = _expansion_at(L, gamma, 0)
            # G α = κα - C0 α with G in 𝔤
            r = [kappa * a - x for a, x in zip(alpha, _matvec(C0, alpha))]
            rows = [list(_matvec(B, alpha)) for B in basis]
            coords = _lie_coords_solve(rows, r)
            if coords is None:
                raise LaxError(f"eigenvector condition cannot be met at {gamma} with κ = {kappa}")
            G = _combine(basis, coords, n)
            L = _rf_add(L, _rf_scale_const(G, ell[s]))
        if kind == "sp":
            for s, (gamma, alpha) in enumerate(T.points):
                if _first_nonzero(alpha) is None:
                    continue
                C1 = _expansion_at(L, gamma, 1)
                sa = lambda M: _dot(alpha, _matvec(sig, _matvec(M, alpha)))  # noqa: E731
                target = -sa(C1)
                if target:
                    rows = [[sa(B)] for B in basis]
                    coords = _lie_coords_solve(rows, [target])
                    if coords is None:
                        raise LaxError(f"αᵗσL_1α = 0 cannot be met at {gamma}")
                    H = _combine(basis, coords, n)
                    L = _rf_add(L, _rf_scale_const(H, emm[s]))
    return LaxElement(L, T)


def _combine(basis, coords, n):
    out = [[ZERO] * n for _ in range(n)]
    for B, c in zip(basis, coords):
        if c:
            for i in range(n):
                for j in range(n):
                    if B[i][j]:
                        out[i][j] = out[i][j] + c * B[i][j]
    return tuple(tuple(r) for r in out)


# ---------------------------------------------------------------------------
# random generators (seeded)
# ---------------------------------------------------------------------------


def _nonzero_scalar(rng, bound=3):
    while True:
        c = random_scalar(rng, bound)
        if c:
            return c


def random_alpha(kind: str, n: int, rng: random.Random) -> tuple:
    if kind != "so":
        while True:
            a = tuple(random_scalar(rng) for _ in range(n))
            if _first_nonzero(a) is not None:
                return a
    if n < 2:
        raise LaxError("so(1) has no nonzero isotropic vectors")
    # (a, b, w) with a² + b² = -wᵗw: a + ib = t, a - ib = -wᵗw / t
    I = GaussianRational(0, 1)
    w = tuple(random_scalar(rng) for _ in range(n - 2))
    t = _nonzero_scalar(rng)
    q = -_dot(w, w) / t
    a = (t + q) / 2
    b = (t - q) / (I * 2)
    return (a, b) + w


def random_tyurin_data(kind: str, size: int, geom: MarkedSphere, rng: random.Random, count: int = 2,
                       sigma=None) -> TyurinData:
    gammas = []
    while len(gammas) < count:
        g = random_scalar(rng, 4)
        if g not in geom.in_points and g not in gammas:
            gammas.append(g)
    pts = tuple((g, random_alpha(kind, size, rng)) for g in gammas)
    return TyurinData(kind, size, pts, sigma)


def _orthogonal_random(u, rng):
    """Random vector ``β`` with ``βᵗu = 0``."""
    n = len(u)
    beta = [random_scalar(rng) for _ in range(n)]
    i0 = _first_nonzero(u)
    if i0 is None:
        return tuple(beta)
    rest = ZERO
    for j in range(n):
        if j != i0:
            rest = rest + beta[j] * u[j]
    beta[i0] = -rest / u[i0]
    return tuple(beta)


def random_params(T: TyurinData, rng: random.Random) -> dict:
    out = {}
    for s, (gamma, alpha) in enumerate(T.points):
        u = _matvec(T.sigma, alpha) if T.matrix_type == "sp" else alpha
        out[s] = {"beta": _orthogonal_random(u, rng), "kappa": random_scalar(rng), "nu": random_scalar(rng)}
    return out


def random_tail(T: TyurinData, geom: MarkedSphere, rng: random.Random, degree: int = 2) -> tuple:
    """Random 𝔤-valued combination of ``z^k`` and ``(z - P_i)^{-1}``, holomorphic at W."""
    n = T.size
    basis = T.lie.matrices
    funcs = [RationalFunction.from_poly(Polynomial.monomial(k)) for k in range(degree + 1)]
    funcs += [RationalFunction.from_factored(ONE, {P: -1}) for P in geom.in_points]
    L = tuple(tuple(ZERO_RF for _ in range(n)) for _ in range(n))
    for f in funcs:
        coords = [random_scalar(rng, 2) if rng.random() < 0.5 else ZERO for _ in basis]
        X = _combine(basis, coords, n)
        if not _is_zero_matrix(X):
            L = _rf_add(L, _rf_scale_const(X, f))
    return L


def random_lax_element(T: TyurinData, geom: MarkedSphere, rng: random.Random) -> LaxElement:
    return make_lax_element(T, geom, random_params(T, rng), random_tail(T, geom, rng))


# ---------------------------------------------------------------------------
# algebra operations
# ---------------------------------------------------------------------------


def lax_bracket(A: LaxElement, B: LaxElement) -> LaxElement:
    """Pointwise commutator."""
    if A.tyurin != B.tyurin:
        raise LaxError("elements carry different Tyurin data")
    return LaxElement(_rf_commutator(A.entries, B.entries), A.tyurin)


def lax_product(A: LaxElement, B: LaxElement) -> LaxElement:
    """Pointwise matrix product (closed for ``gl``)."""
    if A.tyurin != B.tyurin:
        raise LaxError("elements carry different Tyurin data")
    return LaxElement(_rf_mul(A.entries, B.entries), A.tyurin)


def to_current(L: LaxElement, lie: FiniteLieAlgebra | None = None) -> CurrentElement:
    """Coordinates of a 𝔤-valued matrix function in the basis of ``lie``."""
    lie = lie or L.tyurin.lie
    basis = lie.matrices
    n = L.tyurin.size
    A = [[B[i][j] for B in basis] for i in range(n) for j in range(n)]
    # solve entrywise with rational-function right-hand sides via a fixed pivot pattern
    comps = {}
    sol = _solve_rf(A, [L.entries[i][j] for i in range(n) for j in range(n)])
    if sol is None:
        raise LaxError("matrix function is not 𝔤-valued")
    for k, f in enumerate(sol):
        if not f.is_zero():
            comps[k] = MeromorphicForm(0, f)
    return CurrentElement(comps)


def _solve_rf(A, b):
    """Solve ``A x = b`` with constant ``A`` and rational-function ``b``."""
    from .linsolve import _rref

    ncols = len(A[0])
    # row operations are tracked on an augmented identity block
    m = len(A)
    aug = [list(r) + [ONE if j == i else ZERO for j in range(m)] for i, r in enumerate(A)]
    pivots = _rref(aug, ncols)
    x = [ZERO_RF] * ncols
    for r, row in enumerate(aug):
        combo = ZERO_RF
        for i in range(m):
            c = row[ncols + i]
            if c and not b[i].is_zero():
                combo = combo + b[i].scale(c)
        if r < len(pivots):
            x[pivots[r]] = combo
        elif not combo.is_zero():
            return None
    return x


def from_current(c: CurrentElement, lie: FiniteLieAlgebra, T: TyurinData) -> LaxElement:
    n = T.size
    L = tuple(tuple(ZERO_RF for _ in range(n)) for _ in range(n))
    for k, f in c.components.items():
        L = _rf_add(L, _rf_scale_const(lie.matrices[k], f.rep))
    return LaxElement(L, T)
