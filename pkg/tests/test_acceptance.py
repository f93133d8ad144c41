"""Acceptance suite: one PASS/FAIL line per criterion.

Run under pytest, or directly with ``python3 tests/test_acceptance.py``.
"""
import sys

import pytest

from knalg import verify as V

CRITERIA = [
    (1, "Witt recovery, |n|,|m| <= 10, grading (0, 0)", lambda: V.check_witt(10)),
    (2, "KN duality, K in {1,2,3}, six weights, n,m in [-6,6]", lambda: V.check_duality()),
    (3, "Virasoro cocycle n^3 - n and rescaled extension", lambda: V.check_virasoro(10)),
    (4, "cocycle conditions on exhaustive triples, degrees [-4,4], K in {1,2}",
     lambda: V.check_cocycle_conditions(Ks=(1, 2), window=(-4, 4), connections=("0", "z^2+3"))),
    (5, "locality over C_S and single circles, scans [-8,8] grown by 4", lambda: V.check_locality((-8, 8), 4)),
    (6, "almost-grading for K in {2,3}, weight pairs (-1,-1), (0,0), (0,-1)", lambda: V.check_almost_grading()),
    (7, "Poisson Jacobi and Leibniz on 200 seeded triples, K=2", lambda: V.check_poisson(200, seed=2024)),
    (8, "super-Jacobi on homogeneous triples, degrees [-3,3], K in {1,2}", lambda: V.check_super_jacobi()),
    (9, "b-c canonical anticommutators, window [-4,4], weights 0, 1/2, 2", lambda: V.check_clifford()),
    (10, "central charge c_lambda with one global sign", lambda: V.check_central_charge()),
    (11, "affine cocycle for sl(2), |n| <= 8, extension Jacobi", lambda: V.check_affine(8)),
    (12, "Lax closure for gl2, sl2, so3, sp4 and alpha -> 0 degeneration",
     lambda: V.check_lax_closure(pairs=20, seed=7)),
]


def _report(number, title, result):
    return f"{'PASS' if result.passed else 'FAIL'} criterion {number:2d}: {title} -- {result.detail}"


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"criterion_{c[0]:02d}" for c in CRITERIA])
def test_criterion(number, title, check, capsys):
    result = check()
    with capsys.disabled():
        print("\n" + _report(number, title, result))
    assert result.passed, result.detail


if __name__ == "__main__":
    ok = True
    for number, title, check in CRITERIA:
        result = check()
        ok &= result.passed
        print(_report(number, title, result), flush=True)
    sys.exit(0 if ok else 1)
