import json

import numpy as np
import pytest

import schurhorn as sh
from schurhorn.cli import main


@pytest.fixture
def files(tmp_path):
    a = sh.DenseHermitian.from_dense(
        np.array([[1.0, 0.2, 0.0], [0.2, 2.0, 0.0], [0.0, 0.0, 5.0]])
    )
    lam0 = sh.eig_sym(a).eigenvalues
    paths = {
        "A": tmp_path / "A.json",
        "d": tmp_path / "d.json",
        "lam": tmp_path / "lam.json",
        "bad": tmp_path / "bad.json",
        "cfg": tmp_path / "cfg.json",
    }
    json.dump(a.to_json(), open(paths["A"], "w"))
    json.dump([1.0, 2.0, 3.0], open(paths["d"], "w"))
    json.dump([lam0[0] - 1e-5, lam0[1] + 1e-5, lam0[2]], open(paths["lam"], "w"))
    json.dump([1.1, 2.0, 2.9], open(paths["bad"], "w"))
    json.dump(
        {
            "family": "diagonal-distinct",
            "n": 4,
            "trials_per_eps": 2,
            "seed": 9,
            "perturbation_style": "adversarial",
            "eps_grid": [1e-2, 1e-3, 1e-4],
        },
        open(paths["cfg"], "w"),
    )
    return paths, tmp_path


def test_construct_and_validate(files, capsys):
    paths, tmp = files
    cert = tmp / "cert.json"
    assert main(["construct", "-d", str(paths["d"]), "-l", str(paths["bad"]), "-o", str(cert)]) == 2
    lam_ok = tmp / "ok.json"
    json.dump([0.9, 2.0, 3.1], open(lam_ok, "w"))
    assert main(["construct", "-d", str(paths["d"]), "-l", str(lam_ok), "-o", str(cert)]) == 0
    rc = main(["validate", "-A", str(tmp / "missing.json"), "-l", str(lam_ok), "--cert", str(cert)])
    assert rc == 1


def test_correct_validate_roundtrip(files, capsys):
    paths, tmp = files
    cert = tmp / "cert.json"
    assert main(["correct", "-A", str(paths["A"]), "-l", str(paths["lam"]), "-o", str(cert)]) == 0
    assert (
        main(["validate", "-A", str(paths["A"]), "-l", str(paths["lam"]), "--cert", str(cert)]) == 0
    )
    report = json.loads(capsys.readouterr().out)
    assert all(report.values())


def test_decompose_output(files, capsys):
    paths, _ = files
    assert main(["decompose", "-A", str(paths["A"])]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert [b["tag"] for b in payload["blocks"]] == ["StrongSH", "Scalar"]


def test_violate_output(files, capsys):
    paths, _ = files
    assert main(["violate", "-l", str(paths["d"]), "-d", str(paths["d"]), "-i", "0", "--eps", "1e-3"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out == [1.001, 2.0, 2.999]
    # scalar spectrum is a feasibility failure
    flat = paths["d"].parent / "flat.json"
    json.dump([2.0, 2.0], open(flat, "w"))
    assert main(["violate", "-l", str(flat), "-d", str(flat), "-i", "0", "--eps", "1e-3"]) == 2


def test_sweep_csv(files, capsys, tmp_path):
    paths, _ = files
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "-c", str(paths["cfg"]), "-o", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "family,n,eps,trial,distance,gnorm1,gnorm2,diag_resid,spec_resid,status"
    assert len(lines) == 1 + 3 * 2
    stdout = capsys.readouterr().out
    assert "fitted_slope=" in stdout
