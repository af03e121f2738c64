import json
import shutil
import subprocess

import numpy as np
import pytest

from projchar.cli import main
from projchar.coxeter import type_a
from projchar.linalg import matrix_from_dict, unitary_residual
from projchar.pencil import MatrixTuple
from projchar.poly import MultiPoly, canonical_equal
from projchar.projpair import ProjectionPair


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def _run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def z(i):
    return MultiPoly.variable(3, i)


@pytest.fixture
def generic_file(tmp_path, generic_pair_mats):
    return _write(tmp_path / "generic.json", ProjectionPair(*generic_pair_mats).to_dict())


def test_charpoly_both_identity(tmp_path, capsys):
    f = _write(tmp_path / "t.json", MatrixTuple.of(np.eye(2)).to_dict())
    code, out, _ = _run(capsys, "charpoly", f, "--method", "both")
    assert code == 0
    data = json.loads(out)
    assert data["agreement"] is True
    expected = (MultiPoly.variable(2, 0) + MultiPoly.variable(2, 1)) ** 2
    assert canonical_equal(MultiPoly.from_dict(data), expected, 1e-14)


@pytest.mark.parametrize("method", ["det", "ps"])
def test_charpoly_diagonal_pair(tmp_path, capsys, method):
    t = MatrixTuple.of(np.diag([1.0, 1, 0, 0]), np.diag([1.0, 0, 1, 0]))
    f = _write(tmp_path / "t.json", t.to_dict())
    code, out, _ = _run(capsys, "charpoly", f, "--method", method)
    assert code == 0
    expected = z(0) * (z(0) + z(1)) * (z(0) + z(2)) * (z(0) + z(1) + z(2))
    assert canonical_equal(MultiPoly.from_json(out), expected, 1e-12)


def test_charpoly_three_projections(tmp_path, capsys):
    t = tmp_path / "triple.json"
    code, _, _ = _run(capsys, "gen", "random-tuple", "--k", 3, "--n", 3, "--seed", 5, "--out", t)
    assert code == 0
    code, out, _ = _run(capsys, "charpoly", t, "--method", "both")
    q = MultiPoly.from_json(out)
    assert code == 0 and q.nvars == 4 and q.degree == 3


def test_charpoly_output_file(tmp_path, capsys):
    f = _write(tmp_path / "t.json", MatrixTuple.of(np.eye(2)).to_dict())
    dest = tmp_path / "q.json"
    code, out, _ = _run(capsys, "charpoly", f, "--out", dest)
    assert code == 0 and out == ""
    assert dest.read_text().endswith("\n")


def test_analyze_generic(generic_file, capsys):
    code, out, _ = _run(capsys, "projpair", "analyze", generic_file)
    data = json.loads(out)
    assert code == 0
    assert data["invariants"]["m0"] == 1 and data["invariants"]["h_spectrum"] == pytest.approx([0.5])
    assert data["generic"] is True
    assert data["reconstruction_residual"] <= 1e-12
    assert [f["kind"] for f in data["factors"]] == ["quadratic"]


def test_analyze_identity_and_odd(tmp_path, capsys):
    f = _write(tmp_path / "i.json", ProjectionPair(np.eye(2), np.eye(2)).to_dict())
    data = json.loads(_run(capsys, "projpair", "analyze", f)[1])
    assert data["invariants"]["k4"] == 2 and data["generic"] is False
    odd = tmp_path / "odd.json"
    _run(capsys, "gen", "random-projection-pair", "--k", 3, "--seed", 1, "--out", odd)
    data = json.loads(_run(capsys, "projpair", "analyze", odd)[1])
    assert data["generic"] is False


def test_equiv_identical(generic_file, tmp_path, capsys):
    w = tmp_path / "w.json"
    code, out, _ = _run(capsys, "projpair", "equiv", generic_file, generic_file, "--witness-out", w)
    assert code == 0 and json.loads(out)["equivalent"] is True
    np.testing.assert_allclose(matrix_from_dict(json.loads(w.read_text())), np.eye(2), atol=1e-10)


def test_equiv_conjugated(tmp_path, capsys):
    a, b, w = tmp_path / "a.json", tmp_path / "b.json", tmp_path / "w.json"
    _run(capsys, "gen", "random-projection-pair", "--k", 5, "--seed", 11, "--out", a)
    _run(capsys, "gen", "conjugate", "--input", a, "--seed", 12, "--out", b)
    code, out, _ = _run(capsys, "projpair", "equiv", a, b, "--witness-out", w)
    verdict = json.loads(out)
    assert code == 0 and verdict["witness_residual"] <= 1e-7
    assert unitary_residual(matrix_from_dict(json.loads(w.read_text()))) <= 1e-8


def test_equiv_negative(generic_file, tmp_path, capsys):
    b = _write(tmp_path / "c.json", ProjectionPair(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])).to_dict())
    code, out, _ = _run(capsys, "projpair", "equiv", generic_file, b)
    assert code == 2
    assert json.loads(out)["witness"] is None


def test_coxeter_commands(tmp_path, capsys):
    cm = _write(tmp_path / "a2.json", {"n": 2, "m": [[1, 3], [3, 1]]})
    code, out, _ = _run(capsys, "coxeter", "charpoly", cm)
    assert code == 0
    q = MultiPoly.from_json(out)
    assert canonical_equal(q, z(0) ** 2 - z(1) ** 2 - z(2) ** 2 + z(1) * z(2), 1e-14)
    qf = _write(tmp_path / "q.json", q.to_dict())
    code, out, _ = _run(capsys, "coxeter", "recover", qf)
    assert code == 0 and json.loads(out)["m"] == [[1, 3], [3, 1]]
    code, out, _ = _run(capsys, "coxeter", "tits", cm)
    rep = MatrixTuple.from_dict(json.loads(out))
    assert code == 0 and rep.n == 2
    np.testing.assert_allclose(rep.mats[0], [[-1, 1], [0, 1]], atol=1e-15)
    code, out, _ = _run(capsys, "coxeter", "hyperplanes", cm)
    t = MatrixTuple.from_dict(json.loads(out))
    np.testing.assert_allclose(t.mats[0], [[0, 0.5], [0, 1]], atol=1e-15)


def test_coxeter_infinity_round_trip(tmp_path, capsys):
    cm = _write(tmp_path / "inf.json", {"n": 2, "m": [[1, "inf"], ["inf", 1]]})
    q = _write(tmp_path / "q.json", json.loads(_run(capsys, "coxeter", "charpoly", cm)[1]))
    code, out, _ = _run(capsys, "coxeter", "recover", q)
    assert code == 0 and json.loads(out)["m"][0][1] == "inf"


def test_coxeter_recover_rejects(tmp_path, capsys):
    f = _write(tmp_path / "bad.json", (z(0) ** 2 + z(1) * z(2)).to_dict())
    code, _, err = _run(capsys, "coxeter", "recover", f)
    assert code == 1 and "error" in err


def test_gen_determinism(tmp_path, capsys):
    outs = []
    for _ in range(2):
        code, out, _ = _run(capsys, "gen", "random-projection-pair", "--k", 4, "--seed", 42)
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]
    ProjectionPair.from_dict(json.loads(outs[0]))
    other = _run(capsys, "gen", "random-projection-pair", "--k", 4, "--seed", 43)[1]
    assert other != outs[0]


def test_gen_negative_seed(capsys):
    assert _run(capsys, "gen", "random-tuple", "--seed", -1)[0] == 0


def test_exit_codes_for_bad_input(tmp_path, capsys):
    missing = tmp_path / "nope.json"
    assert _run(capsys, "charpoly", missing)[0] == 1
    garbage = tmp_path / "garbage.json"
    garbage.write_text("{not json")
    assert _run(capsys, "charpoly", garbage)[0] == 1
    notproj = _write(tmp_path / "np.json", {"k": 2, "p": {"rows": 2, "cols": 2, "entries": [[2, 0]] * 4},
                                              "q": {"rows": 2, "cols": 2, "entries": [[0, 0]] * 4}})
    assert _run(capsys, "projpair", "analyze", notproj)[0] == 1
    assert _run(capsys, "gen", "random-tuple", "--k", 0)[0] == 1
    big = _write(tmp_path / "big.json", MatrixTuple.of(np.eye(11)).to_dict())
    assert _run(capsys, "charpoly", big, "--method", "ps")[0] == 1


def test_argument_errors_exit_one(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["charpoly", "x.json", "--tol", "-1"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["charpoly", "x.json", "--bogus"])
    assert exc.value.code == 1


def test_hyperplane_tuple_from_cli_is_square(tmp_path, capsys):
    cm = _write(tmp_path / "a3.json", type_a(3).to_dict())
    t = MatrixTuple.from_dict(json.loads(_run(capsys, "coxeter", "hyperplanes", cm)[1]))
    assert t.n == 3 and t.k == 3


@pytest.mark.skipif(shutil.which("projchar") is None, reason="console script not installed")
def test_console_script(tmp_path):
    res = subprocess.run(["projchar", "gen", "random-tuple", "--seed", "7"], capture_output=True, text=True)
    assert res.returncode == 0
    assert MatrixTuple.from_dict(json.loads(res.stdout)).n == 2
