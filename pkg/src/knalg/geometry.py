"""The marked sphere: in-points, the out-point at infinity, cycles and connections."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .exactnum import GaussianRational, as_gaussian
from .ratfunc import INF, ZERO_RF, RationalFunction, divide_out_root, order_at

__all__ = [
    "GeometryError",
    "MarkedSphere",
    "CycleClass",
    "ProjectiveConnection",
    "AffineConnection",
    "ConnectionDiagnostics",
    "GeometryConfig",
    "separating_cycle",
    "unit_cycle",
    "validate_connection",
    "classical",
    "load_geometry",
    "parse_rational_function",
]


class GeometryError(ValueError):
    """Invalid marked-sphere configuration."""


@dataclass(frozen=True)
class MarkedSphere:
    """Genus-0 surface with in-points ``P_1..P_K`` and the single out-point ∞."""

    in_points: tuple

    def __post_init__(self):
        pts = tuple(as_gaussian(p) for p in self.in_points)
        if not pts:
            raise GeometryError("at least one in-point is required")
        if len(set(pts)) != len(pts):
            raise GeometryError("in-points must be pairwise distinct")
        object.__setattr__(self, "in_points", pts)

    genus = 0
    out_point = INF

    @property
    def K(self) -> int:
        return len(self.in_points)

    def point(self, p: int) -> GaussianRational:
        """In-point by 1-based index."""
        return self.in_points[p - 1]

    def to_dict(self) -> dict:
        return {"in_points": [str(p) for p in self.in_points]}


def classical() -> MarkedSphere:
    """The two-point sphere ``I = {0}``, ``O = {∞}``."""
    return MarkedSphere((0,))


@dataclass(frozen=True)
class CycleClass:
    """Integer combination of the small circles ``C_i`` around the in-points."""

    multiplicities: tuple

    def __post_init__(self):
        object.__setattr__(self, "multiplicities", tuple(int(m) for m in self.multiplicities))

    def __add__(self, other: "CycleClass") -> "CycleClass":
        if len(other.multiplicities) != len(self.multiplicities):
            raise GeometryError("cycle classes live on different geometries")
        return CycleClass(tuple(a + b for a, b in zip(self.multiplicities, other.multiplicities)))

    def check(self, geom: MarkedSphere) -> None:
        if len(self.multiplicities) != geom.K:
            raise GeometryError(
                f"cycle has {len(self.multiplicities)} multiplicities, geometry has K={geom.K}"
            )


def separating_cycle(geom: MarkedSphere) -> CycleClass:
    return CycleClass((1,) * geom.K)


def unit_cycle(geom: MarkedSphere, i: int) -> CycleClass:
    """The class of the single circle ``C_i`` (1-based)."""
    if not 1 <= i <= geom.K:
        raise GeometryError(f"no in-point with index {i}")
    return CycleClass(tuple(int(j == i) for j in range(1, geom.K + 1)))


@dataclass(frozen=True)
class ProjectiveConnection:
    local_data: RationalFunction = ZERO_RF


@dataclass(frozen=True)
class AffineConnection:
    local_data: RationalFunction = ZERO_RF


@dataclass
class ConnectionDiagnostics:
    kind: str
    violations: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.valid


def validate_connection(kind: str, conn, geom: MarkedSphere) -> ConnectionDiagnostics:
    """Pole-location check of a projective or affine connection in the z-chart.

    Poles are forbidden at every in-point and at every other finite point;
    only the out-point ∞ may carry a pole.  For projective connections the
    z-chart datum extends globally because ``z -> 1/z`` has vanishing
    Schwarzian.
    """
    if kind not in ("projective", "affine"):
        raise ValueError(f"unknown connection kind {kind!r}")
    data = conn.local_data if hasattr(conn, "local_data") else conn
    diag = ConnectionDiagnostics(kind)
    for p in geom.in_points:
        o = order_at(data, p)
        if o < 0:
            diag.violations.append({"point": str(p), "order": int(o), "reason": "pole at in-point"})
    rest = data.den
    for p in geom.in_points:
        rest = divide_out_root(rest, p)[0]
    if rest.degree == 1:
        root = -rest.coeffs[0] / rest.coeffs[1]
        diag.violations.append({"point": str(root), "order": -1, "reason": "pole outside the marked points"})
    elif rest.degree > 1:
        diag.violations.append({"point": None, "order": None,
                                "reason": f"poles at the roots of {rest} (outside the marked points)"})
    return diag


@dataclass(frozen=True)
class GeometryConfig:
    sphere: MarkedSphere
    projective: ProjectiveConnection = ProjectiveConnection()
    affine: AffineConnection = AffineConnection()


def parse_rational_function(text) -> RationalFunction:
    """Parse an arithmetic expression in ``z`` and ``I`` with exact literals.

    Also accepts ``{"num": {...}, "den": {...}}`` mappings.
    """
    import ast

    if isinstance(text, RationalFunction):
        return text
    if isinstance(text, dict):
        return RationalFunction.from_dict(text)
    if isinstance(text, (int,)):
        return RationalFunction.constant(text)
    src = str(text).replace("^", "**").replace("−", "-")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse rational function {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return RationalFunction.constant(node.value)
        if isinstance(node, ast.Name):
            if node.id == "z":
                return RationalFunction.z()
            if node.id == "I":
                return RationalFunction.constant(GaussianRational(0, 1))
            raise ValueError(f"unknown symbol {node.id!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                exp = node.right
                sign = 1
                if isinstance(exp, ast.UnaryOp) and isinstance(exp.op, ast.USub):
                    sign, exp = -1, exp.operand
                if not (isinstance(exp, ast.Constant) and isinstance(exp.value, int)):
                    raise ValueError("exponents must be integer literals")
                return ev(node.left) ** (sign * exp.value)
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                return a / b
        raise ValueError(f"unsupported expression in {text!r}")

    return ev(tree)


def geometry_from_dict(d: dict) -> GeometryConfig:
    if "in_points" not in d:
        raise GeometryError("geometry config needs 'in_points'")
    pts = d["in_points"]
    if not isinstance(pts, Sequence) or isinstance(pts, str):
        raise GeometryError("'in_points' must be a list of exact scalars")
    try:
        sphere = MarkedSphere(tuple(as_gaussian(str(p)) for p in pts))
        proj = ProjectiveConnection(parse_rational_function(d.get("projective_connection", "0")))
        aff = AffineConnection(parse_rational_function(d.get("affine_connection", "0")))
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise GeometryError(str(exc)) from exc
    return GeometryConfig(sphere, proj, aff)


def load_geometry(path) -> GeometryConfig:
    """Read a geometry JSON file; raises :class:`GeometryError` on bad input."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise GeometryError(f"cannot read geometry {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise GeometryError("geometry file must hold a JSON object")
    return geometry_from_dict(data)
