import json
from fractions import Fraction

import numpy as np
import pytest

from dalat.cli import VERBS, run
from dalat.corpus import random_realization
from dalat.scalar import GR
from dalat.realization import Realization, markov_params
from dalat.verify import verify_all


def call(*argv):
    code, out = run(list(argv))
    return code, out.decode()


@pytest.fixture
def rfile(tmp_path):
    def write(R, name="r.json"):
        p = tmp_path / name
        p.write_text(json.dumps(R.to_json()))
        return str(p)
    return write


def test_spec_examples():
    assert call("basis", "--n", "2", "--z", "3") == (0, "3\n")
    assert call("check-analytic", "--fn", "const1") == (0, "residual 0\n")
    assert call("degree", "--w", "2+3i") == (0, "5\n")


def test_usage_errors_exit_2():
    assert call("frobnicate")[0] == 2
    assert call()[0] == 2
    assert call("basis", "--z", "3")[0] == 2            # missing --n
    assert call("basis", "--n", "2")[0] == 2            # missing --z / --window
    assert call("check-analytic", "--fn", "nope")[0] == 2
    assert call("schur-check", "--dims", "1,2")[0] == 2


def test_usage_error_json():
    code, out = call("--json", "basis", "--n", "2", "--z", "one")
    assert code == 2 and json.loads(out)["code"] == 2


def test_domain_errors_exit_1_with_witness():
    code, out = call("check-analytic", "--fn", "zbar", "--json")
    doc = json.loads(out)
    assert code == 1 and set(doc) == {"code", "message", "witness"} and doc["witness"]
    code, out = call("basis", "--n", "1", "--z=-1+i", "--json")
    assert code == 1 and json.loads(out)["witness"] == "-1+1i"


def test_inadmissible_realization(rfile):
    # I + a- A = 0 for A = -1 - i
    R = Realization(np.array([[GR(-1, -1)]], dtype=object), [[1]], [[1]], [[0]], exact=True)
    code, out = call("eval", "--realization", rfile(R), "--z", "1", "--json")
    assert code == 1 and json.loads(out)["code"] == 1


def test_non_coisometry_is_domain_error():
    assert call("schur-check", "--dims", "2,3,2")[0] == 1


def test_eval_and_tmap(rfile):
    R = random_realization(3, 2)
    path = rfile(R)
    code, out = call("eval", "--realization", path, "--z", "1+i;2")
    doc = json.loads(out)
    assert code == 0 and [v["z"] for v in doc["values"]] == ["1+1i", "2"]
    code, out = call("tmap", "--realization", path, "--markov", "4")
    assert code == 0
    want = markov_params(R, 4).to_json()
    assert json.loads(out)["markov"] == json.loads(json.dumps(want))
    assert call("tmap", "--realization", path, "--t", "1/3")[0] == 0


def test_product_invert_annihilate(rfile, tmp_path):
    R1, R2 = random_realization(1, 2), random_realization(2, 1)
    a, b = rfile(R1, "a.json"), rfile(R2, "b.json")
    code, out = call("product", "--left", b, "--right", a)
    P = Realization.from_json(json.loads(out))
    assert code == 0 and P.n == 3
    D1 = Realization([[Fraction(1, 2)]], [[1]], [[1]], [[2]], exact=True)
    code, out = call("invert", "--realization", rfile(D1, "d.json"))
    assert code == 0 and Realization.from_json(json.loads(out)).n == 1
    zeroD = Realization([[0]], [[1]], [[1]], [[0]], exact=True)
    assert call("invert", "--realization", rfile(zeroD, "z.json"))[0] == 1
    code, out = call("annihilate", "--realization", a)
    assert code == 0 and len(json.loads(out)["coeffs"]) == 3


def test_basis_window_csv():
    code, out = call("basis", "--n", "2", "--window", "0,1,0,0")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "x,y,n,re,im" and len(lines) == 1 + 2 * 3


def test_integrate():
    code, out = call("integrate", "--fn", "const1", "--z", "2+i")
    assert code == 0 and json.loads(out)["value"] == [[["2", "1"]]]
    code, out = call("integrate", "--fn", "z", "--path", "0;1;1+i;i;0")
    assert code == 0 and json.loads(out)["value"] == [[["0", "0"]]]


def test_mesh_converge_csv():
    code, out = call("mesh-converge", "--n", "2", "--x", "1", "--h-list", "1/2,1/4")
    assert (code, out) == (0, "h,value,limit,abs_err\n1/2,1/4,1/2,1/4\n1/4,3/8,1/2,1/8\n")
    assert call("mesh-converge", "--n", "2", "--x", "1", "--h-list", "0")[0] == 2


def test_mode_flag_and_environment(monkeypatch):
    exact = call("basis", "--n", "3", "--z", "2+i", "--json")[1]
    assert json.loads(exact)["mode"] == "exact"
    monkeypatch.setenv("DALAT_MODE", "float")
    doc = json.loads(call("basis", "--n", "3", "--z", "2+i", "--json")[1])
    assert doc["mode"] == "float" and all(isinstance(v, float) for v in doc["value"])
    doc = json.loads(call("basis", "--n", "3", "--z", "2+i", "--json", "--mode", "exact")[1])
    assert doc["mode"] == "exact"


def test_out_file(tmp_path):
    target = tmp_path / "o.txt"
    assert call("--out", str(target), "degree", "--w", "1-2i") == (0, "")
    assert target.read_text() == "3\n"


def test_determinism():
    argv = ["schur-check", "--dims", "3,1,2", "--seed", "7", "--json"]
    first = run(argv)
    assert first[0] == 0 and first == run(argv)
    assert run(["schur-check", "--dims", "3,1,2", "--seed", "8"]) != first


def test_every_verb_has_help():
    for verb in VERBS:
        code, out = call(verb, "--help")
        assert code == 0 and "usage" in out


def test_verify_report_roundtrip():
    rep = verify_all("quick", only=["si3", "binomial", "mesh-adjoint"])
    again = json.loads(json.dumps(rep))
    assert again == rep and rep["passed"] and rep["failed"] == []
    assert [c["name"] for c in rep["checks"]] == ["si3", "binomial", "mesh-adjoint"]
