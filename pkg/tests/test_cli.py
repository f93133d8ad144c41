import json
import random

import pytest

from knalg.cli import main
from knalg.geometry import MarkedSphere
from knalg.lax import random_lax_element, random_tyurin_data


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def geom2(tmp_path):
    p = tmp_path / "g2.json"
    p.write_text(json.dumps({"in_points": ["0", "1"], "projective_connection": "z^2+3"}))
    return str(p)


def test_basis_classical_vector_fields(capsys):
    code, out, _ = run(capsys, "basis", "--lambda", "-1", "--window", "-2:2")
    assert code == 0
    els = json.loads(out)["elements"]
    assert [e["degree"] for e in els] == [-2, -1, 0, 1, 2]
    for e in els:
        k = e["degree"] + 1
        f = e["form"]
        assert (f["num"], f["den"]) == (({str(k): "1"}, {"0": "1"}) if k >= 0 else ({"0": "1"}, {str(-k): "1"}))


def test_basis_two_points(capsys, geom2):
    code, out, _ = run(capsys, "basis", "--geometry", geom2, "--lambda", "0", "--window", "0:0")
    assert code == 0
    els = json.loads(out)["elements"]
    assert [e["exponents"] for e in els] == [[0, 1], [1, 0]]
    assert els[0]["orders"] == {"0": 0, "1": 1}


def test_malformed_geometry(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "basis", "--geometry", str(bad))
    assert code == 2 and "error" in err


@pytest.mark.parametrize("argv", [
    ["basis", "--window", "3:1"],
    ["basis", "--lambda", "1/3"],
    ["cocycle", "--cycle", "1,1"],
    ["cocycle", "--kind", "psi3", "--projective", "1/z"],
    ["fock", "--operator", "Q:1:1"],
    ["lax", "check"],
])
def test_config_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_pairing(capsys, geom2):
    code, out, _ = run(capsys, "pairing", "--geometry", geom2, "--lambda", "1/2", "--window", "-2:2")
    assert code == 0
    d = json.loads(out)
    assert d["duality_violations"] == 0
    assert all(e["n"] == e["m"] and e["p"] == e["r"] and e["value"] == "1" for e in d["nonzero"])


def test_structconsts_warns_on_narrow_window(capsys, geom2):
    code, out, err = run(capsys, "structconsts", "--geometry", geom2, "--window", "-1:1")
    assert code == 0
    assert "may be truncated" in err
    d = json.loads(out)
    assert d["grading_bounds"]["lower_shift"] == 0 and d["leading_term_defects"] == 0


def test_structconsts_jobs_env(capsys, geom2, monkeypatch):
    _, serial, _ = run(capsys, "structconsts", "--geometry", geom2, "--window", "-2:2", "--lambda", "0")
    monkeypatch.setenv("KNALG_JOBS", "2")
    _, parallel, _ = run(capsys, "structconsts", "--geometry", geom2, "--window", "-2:2", "--lambda", "0")
    assert serial == parallel


def test_cocycle_diagonal_table(capsys):
    code, out, _ = run(capsys, "cocycle", "--kind", "psi3", "--window", "-10:10")
    assert code == 0
    d = json.loads(out)
    vals = {(r["x"][0], r["y"][0]): int(r["value"]) for r in d["values"]}
    assert vals == {(n, -n): n ** 3 - n for n in range(-10, 11) if n ** 3 - n}
    assert d["locality"]["local"] and d["locality"]["support"] == [0, 0]


def test_cocycle_csv(capsys, geom2, tmp_path):
    out_path = tmp_path / "t.csv"
    code, _, _ = run(capsys, "cocycle", "--geometry", geom2, "--kind", "psi1", "--cycle", "1,0",
                     "--window", "-2:2", "--format", "csv", "--out", str(out_path))
    assert code == 0
    lines = out_path.read_text().splitlines()
    assert lines[0] == "value,x,y" and len(lines) > 1


def test_extend(capsys):
    code, out, _ = run(capsys, "extend", "--kind", "psi3", "--rescale", "-1/12", "--window", "-2:2")
    assert code == 0
    d = json.loads(out)
    assert d["certified"] and d["rescale"] == "-1/12"
    # only i < j pairs are listed: (e_{-2}, e_2) -> -(1/12)((-2)^3 + 2)
    assert [(r["i"], r["j"], r["central"]) for r in d["central_terms"]] == [(0, 4, "1/2")]


def test_extend_affine(capsys):
    code, out, _ = run(capsys, "extend", "--kind", "psi2", "--lie", "sl2", "--window", "-1:1")
    assert code == 0 and json.loads(out)["certified"]


def test_fock(capsys):
    code, out, _ = run(capsys, "fock", "--lambda", "2", "--window", "-1:4", "--operator", "L:0:1", "--max-monomials", "4")
    assert code == 0
    d = json.loads(out)
    assert d["central"]["c_lambda"] == "-26"
    assert d["central"]["reduced"] == d["central"]["expected"]


def test_lax_check(capsys, tmp_path):
    g = MarkedSphere((0, 1))
    rng = random.Random(3)
    T = random_tyurin_data("sl", 2, g, rng)
    L = random_lax_element(T, g, rng)
    geo = tmp_path / "g.json"
    geo.write_text(json.dumps({"in_points": ["0", "1"]}))
    (tmp_path / "t.json").write_text(json.dumps(T.to_dict()))
    (tmp_path / "l.json").write_text(json.dumps(L.to_dict()))
    args = ["lax", "check", "--geometry", str(geo), "--tyurin", str(tmp_path / "t.json")]
    code, out, _ = run(capsys, *args, "--element", str(tmp_path / "l.json"))
    assert code == 0 and json.loads(out)["valid"]
    bad = L.to_dict()
    bad["entries"][0][0] = "1/(z-7)^2"
    (tmp_path / "b.json").write_text(json.dumps(bad))
    code, out, _ = run(capsys, *args, "--element", str(tmp_path / "b.json"))
    assert code == 3 and json.loads(out)["violations"]


def test_lax_close_check_is_deterministic(capsys):
    code1, out1, _ = run(capsys, "lax", "close-check", "--type", "so", "--size", "3", "--pairs", "2", "--seed", "5")
    code2, out2, _ = run(capsys, "lax", "close-check", "--type", "so", "--size", "3", "--pairs", "2", "--seed", "5")
    assert code1 == code2 == 0 and out1 == out2
    assert json.loads(out1)["seed"] == 5


def test_verify(capsys):
    code, out, err = run(capsys, "verify")
    assert code == 0
    d = json.loads(out)
    assert d["passed"] and d["seed"] == 20240601
    assert err.count("PASS") == len(d["suites"])
