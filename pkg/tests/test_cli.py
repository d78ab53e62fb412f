import json

import pytest

from halfhecke.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_eigenvalue_example(capsys):
    code, out = run(capsys, "hecke", "eigenvalue", "--k", "1", "--n", "1", "--j", "1", "--p", "3", "--chi", "1")
    assert code == 0
    assert out.strip() == '{"lambda":"4/1"}'


def test_neighbors_example(capsys):
    code, out = run(capsys, "lattice", "neighbors", "--gram", "2I3", "--p", "3", "--j", "1")
    data = json.loads(out)
    assert code == 0 and data["count"] == 4 == len(data["neighbors"]) == data["formula"]


def test_gauss_commands(capsys):
    for argv in (["gauss", "twisted", "--gram", "diag:1,-1", "--p", "3"],
                 ["gauss", "alpha", "--gram", "[[0,0],[0,0]]", "--p", "3"],
                 ["gauss", "gyd", "--shape", "1,1,0,0", "--Y", "[[1,3],[1,2]]", "--p", "3"]):
        code, out = run(capsys, *argv)
        assert code == 0 and json.loads(out)["match"] is True


def test_ff_commands(capsys):
    code, out = run(capsys, "ff", "classify", "--gram", "diag:1,-1", "--p", "5")
    assert json.loads(out)["regular_rank"] == 2
    code, out = run(capsys, "ff", "rstar", "--gram", "diag:1,-1", "--sub", "[[0]]", "--p", "3")
    assert json.loads(out) == {"rstar": 2}
    code, out = run(capsys, "ff", "iso", "--gram", "diag:1,2,0", "--p", "3", "--a", "1")
    assert json.loads(out)["match"] is True


def test_lattice_and_theta_commands(capsys, tmp_path):
    _, out = run(capsys, "lattice", "level", "--gram", "2I3")
    assert json.loads(out)["level"] == 4
    _, out = run(capsys, "lattice", "snf", "--matrix", "[[3,1],[0,3]]")
    assert json.loads(out)["invariants"] == [1, 9]
    _, out = run(capsys, "lattice", "between", "--gram", "[[2]]", "--p", "3")
    assert json.loads(out)["count"] == 3
    _, out = run(capsys, "theta", "repr", "--gram", "2I3", "--T", "[[18]]")
    assert json.loads(out)["count"] == 30
    _, out = run(capsys, "theta", "coeffs", "--gram", "2I3", "--n", "1", "--bound", "4",
                 "--cache-dir", str(tmp_path))
    assert [e["c"] for e in json.loads(out)["coefficients"]] == ["1/1", "6/1", "12/1"]
    assert any(tmp_path.iterdir())


def test_hecke_apply_and_verifiers(capsys):
    code, out = run(capsys, "hecke", "apply", "--gram", "2I3", "--p", "3", "--n", "1", "--j", "1",
                    "--op", "Ttilde", "--at", "[[2]]", "--at", "[[4]]")
    assert code == 0
    assert [r["value"] for r in json.loads(out)["per_coefficient"]] == ["30/1", "60/1"]
    code, out = run(capsys, "hecke", "verify-eichler", "--gram", "diag:2,2,4", "--p", "3", "--j", "1",
                    "--n", "1")
    assert code == 0 and json.loads(out)["pass"] is True
    code, out = run(capsys, "hecke", "bound", "--k", "1", "--n", "2", "--j", "1", "--p", "3")
    assert code == 0 and json.loads(out)["M"] == "33/16"


def test_verification_failure_exits_one(capsys):
    code, out = run(capsys, "hecke", "verify-annihilate", "--gram", "2I3", "--p", "3", "--n", "2",
                    "--at", "[[0,0],[0,0]]")
    assert code == 1 and json.loads(out)["pass"] is False
    code, _ = run(capsys, "hecke", "verify-annihilate", "--gram", "diag:2,2,4", "--p", "3", "--n", "2",
                  "--bound", "4")
    assert code == 0


def test_jacobi_commands(capsys, tmp_path):
    _, out = run(capsys, "jacobi", "lift", "--gram", "2I3", "--n", "1", "--bound", "4")
    store = json.loads(out)["store"]
    path = tmp_path / "store.json"
    path.write_text(json.dumps(store))
    _, out = run(capsys, "jacobi", "psi", "--store", str(path), "--n", "1")
    assert json.loads(out)["store"] == sorted(store, key=lambda e: (e["T"], e["R"]))
    code, out = run(capsys, "jacobi", "verify", "--gram", "2I3", "--n", "1", "--p", "2", "--j", "1")
    assert code == 0 and json.loads(out)["relation"] == "Tj-psi"
    code, out = run(capsys, "jacobi", "apply", "--gram", "2I3", "--n", "1", "--p", "3", "--j", "1",
                    "--variant", "Ttilde", "--bound", "2")
    assert code == 0
    vals = {(tuple(map(tuple, e["T"])), tuple(e["R"])): e["c"] for e in json.loads(out)["store"]}
    assert vals[(((2,),), (0,))] == {"a": "30/1", "b": "0/1", "p": 3}


def test_domain_and_usage_errors(capsys):
    code, out = run(capsys, "hecke", "eigenvalue", "--k", "1", "--n", "1", "--j", "2", "--p", "3")
    assert code == 2 and "j=2" in json.loads(out)["message"]
    code, _ = run(capsys, "hecke", "eigenvalue", "--k", "1", "--n", "1", "--j", "1")
    err = capsys.readouterr().err
    assert code == 2
    code = main(["hecke", "eigenvalue", "--k", "1", "--n", "1", "--j", "1"])
    assert code == 2
    code, out = run(capsys, "lattice", "level", "--gram", "[[1,2]")
    assert code == 2
    code, _ = run(capsys, "suite", "nonsense")
    assert code == 2
    del err


def test_usage_error_names_flag(capsys):
    main(["hecke", "eigenvalue", "--k", "1", "--n", "1", "--j", "1"])
    assert "--p" in capsys.readouterr().err
    code, out = run(capsys, "gauss", "gyd", "--shape", "1,x", "--Y", "[[1]]", "--p", "3")
    assert code == 2 and "--shape" in json.loads(out)["message"]


def test_cap_error_reports_bound(capsys):
    code, out = run(capsys, "lattice", "neighbors", "--gram", "2I3", "--p", "3", "--j", "1", "--cap", "3")
    assert code == 2 and "cap" in json.loads(out)["message"]


def test_output_is_deterministic(capsys, tmp_path):
    argv = ["hecke", "apply", "--gram", "diag:2,2,4", "--p", "3", "--n", "2", "--j", "1", "--bound", "4",
            "--op", "Tprime"]
    _, a = run(capsys, *argv, "--out", str(tmp_path / "a.json"))
    _, b = run(capsys, *argv)
    assert a == b
    assert (tmp_path / "a.json").read_text() == a


@pytest.mark.parametrize("name", ["gauss"])
def test_suite_command(capsys, name):
    code, out = run(capsys, "suite", name)
    data = json.loads(out)
    assert code == 0 and data["pass"] is True and data["suite"] == name
