"""Command-line front end: ``knalg <command> [options]``.

Exit codes: 0 success, 2 configuration error, 3 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import random
import re
import sys
from pathlib import Path

from . import __version__
from .algebras import AlgebraError, CurrentElement, D1Element, SuperElement, load_lie_algebra
from .cocycles import (
    KINDS,
    CocycleError,
    CocycleSpec,
    ExtendedElement,
    central_extend,
    locality_scan,
)
from .exactnum import HalfInteger, as_gaussian
from .fock import FockSpace, FockVector, central_charge
from .forms import MeromorphicForm, order_at_infinity
from .geometry import (
    AffineConnection,
    CycleClass,
    GeometryConfig,
    GeometryError,
    MarkedSphere,
    ProjectiveConnection,
    classical,
    load_geometry,
    parse_rational_function,
)
from .knbasis import (
    basis_element,
    basis_form,
    degree_json,
    degrees_in,
    GradedIndex,
    grading_bounds,
    kn_pairing,
    leading_term_defects,
    structure_constants,
)
from .lax import LaxElement, LaxError, TyurinData, is_lax_element, lax_bracket, random_lax_element, random_tyurin_data
from .ratfunc import order_at

EXIT_OK, EXIT_CONFIG, EXIT_VERIFY = 0, 2, 3
DEFAULT_SEED = 20240601
MINUS_HALF = HalfInteger("-1/2")


class ConfigError(Exception):
    """Bad command-line configuration."""


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------


def _half(text: str) -> HalfInteger:
    try:
        return HalfInteger(text)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"not an element of ½ℤ: {text!r}") from exc


def _window(text: str) -> tuple:
    try:
        lo, hi = text.split(":")
        lo, hi = HalfInteger(lo), HalfInteger(hi)
    except ValueError as exc:
        raise ConfigError(f"window must look like LO:HI, got {text!r}") from exc
    if lo > hi:
        raise ConfigError("window needs LO <= HI")
    return lo, hi


def _geometry(args) -> GeometryConfig:
    if not args.geometry:
        return GeometryConfig(classical())
    return load_geometry(args.geometry)


def _cycle(args, geom: MarkedSphere) -> CycleClass:
    if not args.cycle:
        return CycleClass((1,) * geom.K)
    try:
        mult = tuple(int(x) for x in args.cycle.split(","))
    except ValueError as exc:
        raise ConfigError(f"cycle must be comma-separated integers, got {args.cycle!r}") from exc
    c = CycleClass(mult)
    c.check(geom)
    return c


def _jobs(args) -> int:
    if args.jobs is not None:
        return max(1, args.jobs)
    env = os.environ.get("KNALG_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ConfigError(f"KNALG_JOBS must be an integer, got {env!r}") from exc
    return 1


def _form_json(f: MeromorphicForm) -> dict:
    return f.to_dict()


def _emit(args, payload: dict, rows: list | None = None) -> None:
    if args.format == "csv":
        if rows is None:
            raise ConfigError(f"command {args.command!r} has no CSV export")
        buf = io.StringIO()
        fields = sorted({k for r in rows for k in r})
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v) for k, v in r.items()})
        text = buf.getvalue()
    else:
        text = json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_basis(args) -> int:
    cfg = _geometry(args)
    geom = cfg.sphere
    lam = _half(args.lam)
    lo, hi = _window(args.window)
    rows = []
    for n in degrees_in(lam, lo, hi):
        for p in range(1, geom.K + 1):
            be = basis_element(GradedIndex(lam, n, p), geom)
            rows.append({
                "weight": str(lam),
                "degree": degree_json(n),
                "point": p,
                "form": _form_json(be.form),
                "exponents": list(be.exponents),
                "normalization": str(be.normalization),
                "orders": {str(P): int(order_at(be.form.rep, P)) for P in geom.in_points},
                "order_at_infinity": int(order_at_infinity(be.form)),
            })
    payload = {
        "geometry": geom.to_dict(),
        "local_coordinates": "z_p = z - P_p",
        "elements": rows,
    }
    _emit(args, payload, rows)
    return EXIT_OK


def cmd_pairing(args) -> int:
    geom = _geometry(args).sphere
    lam = _half(args.lam)
    lo, hi = _window(args.window)
    entries, bad = [], 0
    for n in degrees_in(lam, lo, hi):
        for m in degrees_in(lam, lo, hi):
            for p in range(1, geom.K + 1):
                for r in range(1, geom.K + 1):
                    v = kn_pairing(basis_form(lam, n, p, geom), basis_form(1 - lam, -m, r, geom), geom)
                    want = 1 if (n == m and p == r) else 0
                    if v != want:
                        bad += 1
                    if v:
                        entries.append({"n": degree_json(n), "p": p, "m": degree_json(m), "r": r, "value": str(v)})
    payload = {"lambda": str(lam), "geometry": geom.to_dict(), "nonzero": entries, "duality_violations": bad}
    _emit(args, payload, entries)
    return EXIT_VERIFY if bad else EXIT_OK


def cmd_structconsts(args) -> int:
    geom = _geometry(args).sphere
    lam, nu = _half(args.lam), _half(args.nu)
    lo, hi = _window(args.window)
    table = structure_constants(lam, nu, args.op, (lo, hi), geom, jobs=_jobs(args))
    payload = table.to_json()
    try:
        gb = grading_bounds(table)
        payload["grading_bounds"] = {"lower_shift": gb.lower_shift, "upper_shift": gb.upper_shift}
        if int(hi - lo) < gb.upper_shift + 2:
            print(f"warning: window {lo}:{hi} narrower than upper shift + 2 = {gb.upper_shift + 2}; "
                  "grading bounds may be truncated", file=sys.stderr)
    except ValueError:
        payload["grading_bounds"] = None
    defects = leading_term_defects(table)
    payload["leading_term_defects"] = len(defects)
    rows = [
        {"n": e["n"], "p": e["p"], "m": e["m"], "r": e["r"], "h": t["h"], "s": t["s"], "c": t["c"]}
        for e in payload["entries"] for t in e["terms"]
    ]
    _emit(args, payload, rows)
    return EXIT_VERIFY if defects else EXIT_OK


def _cocycle_spec(args, cfg: GeometryConfig) -> CocycleSpec:
    geom = cfg.sphere
    proj = cfg.projective
    aff = cfg.affine
    if args.projective:
        proj = ProjectiveConnection(parse_rational_function(args.projective))
    if args.affine:
        aff = AffineConnection(parse_rational_function(args.affine))
    lie = load_lie_algebra(args.lie) if args.kind == "psi2" else None
    return CocycleSpec(args.kind, geom, _cycle(args, geom), proj, aff, lie)


def _label(x):
    return [degree_json(v) if isinstance(v, HalfInteger) else v for v in x]


def cmd_cocycle(args) -> int:
    cfg = _geometry(args)
    spec = _cocycle_spec(args, cfg)
    lo, hi = _window(args.window)
    rep = locality_scan(spec, (lo, hi))
    rows = [{"x": _label(a), "y": _label(b), "value": str(v)} for (a, b), v in rep.values.items()]
    payload = {"kind": spec.kind, "cycle": list(spec.cycle.multiplicities), "values": rows,
               "locality": rep.to_json()}
    _emit(args, payload, rows)
    return EXIT_OK


def _sample(spec: CocycleSpec, lo, hi) -> tuple:
    G = spec.geom
    pts = range(1, G.K + 1)
    if spec.kind == "psi3":
        return [basis_form(-1, n, p, G) for n in degrees_in(-1, lo, hi) for p in pts], False
    if spec.kind == "psi1":
        # the abelian algebra A carries no condition; certify on D¹
        return [D1Element(basis_form(0, n, p, G), MeromorphicForm.zero(-1))
                for n in degrees_in(0, lo, hi) for p in pts] + \
               [D1Element(MeromorphicForm.zero(0), basis_form(-1, n, p, G))
                for n in degrees_in(-1, lo, hi) for p in pts], False
    if spec.kind == "psi4":
        return [D1Element(basis_form(0, n, p, G), MeromorphicForm.zero(-1))
                for n in degrees_in(0, lo, hi) for p in pts] + \
               [D1Element(MeromorphicForm.zero(0), basis_form(-1, n, p, G))
                for n in degrees_in(-1, lo, hi) for p in pts], False
    if spec.kind == "psi2":
        return [CurrentElement({i: basis_form(0, n, p, G)})
                for i in range(spec.lie.dimension) for n in degrees_in(0, lo, hi) for p in pts], False
    return [SuperElement.even(basis_form(-1, n, p, G)) for n in degrees_in(-1, lo, hi) for p in pts] + \
           [SuperElement.odd(basis_form(MINUS_HALF, n, p, G)) for n in degrees_in(MINUS_HALF, lo, hi)
            for p in pts], True


def cmd_extend(args) -> int:
    cfg = _geometry(args)
    spec = _cocycle_spec(args, cfg)
    lo, hi = _window(args.window)
    sample, graded = _sample(spec, lo, hi)
    try:
        ext = central_extend(spec, sample, rescale=as_gaussian(args.rescale), super_graded=graded)
    except CocycleError as exc:
        payload = {"kind": spec.kind, "certified": False, "error": str(exc)}
        _emit(args, payload, [payload])
        return EXIT_VERIFY
    rows = []
    for i, j in itertools.combinations(range(len(sample)), 2):
        c = ext.cocycle(sample[i], sample[j])
        if c:
            rows.append({"i": i, "j": j, "central": str(c)})
    payload = {"kind": spec.kind, "certified": True, "sample_size": len(sample),
               "rescale": str(ext.rescale), "central_terms": rows}
    _emit(args, payload, rows)
    return EXIT_OK


def _operator(text: str, geom: MarkedSphere) -> D1Element:
    try:
        kind, n, p = text.split(":")
        n, p = HalfInteger(n), int(p)
    except ValueError as exc:
        raise ConfigError(f"operator must look like L:n:p or A:n:p, got {text!r}") from exc
    if kind == "L":
        return D1Element(MeromorphicForm.zero(0), basis_form(-1, n, p, geom))
    if kind == "A":
        return D1Element(basis_form(0, n, p, geom), MeromorphicForm.zero(-1))
    raise ConfigError(f"operator kind must be L or A, got {kind!r}")


def cmd_fock(args) -> int:
    geom = _geometry(args).sphere
    lam = _half(args.lam)
    lo, hi = _window(args.window)
    F = FockSpace(lam, geom, None if args.T is None else _half(args.T))
    x = _operator(args.operator, geom)
    window_mons = F.monomials_in_window(lo, hi)
    index = {m: k for k, m in enumerate(window_mons)}
    mons = window_mons[: args.max_monomials]
    entries = []
    for k, m in enumerate(mons):
        img = F.regularized_action(x, FockVector.basis(m))
        for m2, c in sorted(img.terms.items(), key=lambda kv: (kv[0].tail_start, kv[0].prefix)):
            entries.append({"col": k, "row": index.get(m2), "target": F.describe(m2), "c": str(c)})
    payload = {
        "lambda": str(lam),
        "operator": args.operator,
        "monomials": [F.describe(m) for m in mons],
        "entries": entries,
    }
    if geom.K == 1:
        vac = F.vacuum()
        e = lambda n: D1Element(MeromorphicForm.zero(0), basis_form(-1, n, 1, geom))  # noqa: E731
        nmax = max(1, int(hi))
        chi = {n: F.rep_cocycle(e(n), e(-n), vac) for n in range(1, nmax + 1)}
        c_lam = central_charge(lam)
        payload["central"] = {
            "c_lambda": str(c_lam),
            "chi": {str(n): str(v) for n, v in chi.items()},
            "reduced": {str(n): str(chi[n] - chi[1] * n) for n in chi},
            "expected": {str(n): str(c_lam * (n ** 3 - n) / 12) for n in chi},
        }
    _emit(args, payload, entries)
    return EXIT_OK


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


def cmd_lax(args) -> int:
    geom = _geometry(args).sphere
    if args.action == "check":
        if not args.tyurin or not args.element:
            raise ConfigError("lax check needs --tyurin and --element")
        T = TyurinData.from_dict(_read_json(args.tyurin))
        raw = _read_json(args.element)
        rows = raw["entries"] if isinstance(raw, dict) else raw
        try:
            entries = [[parse_rational_function(x) for x in row] for row in rows]
            L = LaxElement(entries, T)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"bad Lax element: {exc}") from exc
        diag = is_lax_element(L, T, geom)
        payload = {"valid": diag.valid, "violations": diag.violations, "certificates": diag.certificates}
        _emit(args, payload, diag.violations)
        return EXIT_OK if diag.valid else EXIT_VERIFY
    rng = random.Random(args.seed)
    if not args.type:
        raise ConfigError("lax close-check needs --type")
    T = random_tyurin_data(args.type, args.size, geom, rng, count=args.points) if args.tyurin is None else \
        TyurinData.from_dict(_read_json(args.tyurin))
    fails = []
    for k in range(args.pairs):
        A = random_lax_element(T, geom, rng)
        B = random_lax_element(T, geom, rng)
        d = is_lax_element(lax_bracket(A, B), T, geom)
        if not d.valid:
            fails.append({"pair": k, "violations": d.violations})
    payload = {"tyurin": T.to_dict(), "seed": args.seed, "pairs": args.pairs, "failures": fails}
    _emit(args, payload, fails)
    return EXIT_VERIFY if fails else EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_suites

    cfg = _geometry(args)
    lo, hi = _window(args.window)
    results = run_suites(cfg, (lo, hi), seed=args.seed)
    rows = [{"suite": name, "passed": ok, "detail": detail} for name, ok, detail in results]
    for r in rows:
        print(f"{'PASS' if r['passed'] else 'FAIL'} {r['suite']}: {r['detail']}", file=sys.stderr)
    payload = {"seed": args.seed, "suites": rows, "passed": all(r["passed"] for r in rows)}
    _emit(args, payload, rows)
    return EXIT_OK if payload["passed"] else EXIT_VERIFY


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--geometry", help="geometry JSON file (default: classical, in-point 0)")
    common.add_argument("--lambda", dest="lam", default="-1", help="weight λ in ½ℤ")
    common.add_argument("--nu", default="-1", help="second weight ν in ½ℤ")
    common.add_argument("--window", default="-4:4", help="degree window LO:HI")
    common.add_argument("--cycle", help="cycle multiplicities m1,m2,... (default: separating cycle)")
    common.add_argument("--out", help="write output to this file")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--jobs", type=int, default=None, help="worker processes (default: $KNALG_JOBS or 1)")

    p = argparse.ArgumentParser(prog="knalg", description="Exact Krichever-Novikov type algebra computations.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("basis", parents=[common], help="basis elements f^λ_{n,p}")
    sub.add_parser("pairing", parents=[common], help="duality pairing table")
    s = sub.add_parser("structconsts", parents=[common], help="structure constants and grading bounds")
    s.add_argument("--op", choices=("product", "bracket"), default="bracket")
    for name in ("cocycle", "extend"):
        s = sub.add_parser(name, parents=[common],
                           help="cocycle values and locality" if name == "cocycle" else "certified central extension")
        s.add_argument("--kind", choices=KINDS, default="psi3")
        s.add_argument("--lie", default="sl2", help="Lie algebra for psi2: built-in name or JSON file")
        s.add_argument("--projective", help="projective connection R(z) (overrides the geometry file)")
        s.add_argument("--affine", help="affine connection T(z) (overrides the geometry file)")
        if name == "extend":
            s.add_argument("--rescale", default="1", help="scalar applied to the cocycle, e.g. -1/12")
    s = sub.add_parser("fock", parents=[common], help="regularized action on wedge monomials")
    s.add_argument("--T", default=None, help="reference vacuum degree (default 0 or 1/2)")
    s.add_argument("--operator", default="L:0:1", help="L:n:p (vector field) or A:n:p (function)")
    s.add_argument("--max-monomials", type=int, default=64)
    s = sub.add_parser("lax", parents=[common], help="Lax operator membership and closure")
    s.add_argument("action", choices=("check", "close-check"))
    s.add_argument("--tyurin", help="Tyurin data JSON")
    s.add_argument("--element", help="element JSON: {\"entries\": [[\"expr\", ...], ...]}")
    s.add_argument("--type", help="gl, sl, so or sp (close-check)")
    s.add_argument("--size", type=int, default=2)
    s.add_argument("--points", type=int, default=2)
    s.add_argument("--pairs", type=int, default=20)
    sub.add_parser("verify", parents=[common], help="run the invariant suites")
    return p


COMMANDS = {
    "basis": cmd_basis,
    "pairing": cmd_pairing,
    "structconsts": cmd_structconsts,
    "cocycle": cmd_cocycle,
    "extend": cmd_extend,
    "fock": cmd_fock,
    "lax": cmd_lax,
    "verify": cmd_verify,
}


_NUMERIC = re.compile(r"^-[0-9.]+(/[0-9]+)?(:-?[0-9.]+(/[0-9]+)?)?$")
_VALUED = ("--window", "--lambda", "--nu", "--T", "--rescale")


def _bind_negative_values(argv: list) -> list:
    """Glue ``--window -2:2`` into ``--window=-2:2`` so argparse does not read a flag."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUED and i + 1 < len(argv) and _NUMERIC.match(argv[i + 1]):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_bind_negative_values(argv))
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, GeometryError, AlgebraError, LaxError, CocycleError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
