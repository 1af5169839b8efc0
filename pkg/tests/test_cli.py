"""The command-line surface: exit codes, JSON shape, determinism."""

import json
import os

import pytest

from frobenii.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_catalog_list(capsys):
    code, data = run_cli(capsys, "catalog", "list")
    assert code == 0
    assert "A3" in data["results"]["potentials"]


def test_catalog_show_roundtrips(capsys, tmp_path):
    code, data = run_cli(capsys, "catalog", "show", "A3")
    assert code == 0
    from frobenii.frobenius import catalog, potential_from_dict
    P = potential_from_dict(data["results"])
    assert P.F == catalog("A3").F


def test_wdvv_check_catalog_passes(capsys):
    code, data = run_cli(capsys, "wdvv", "check", "A3")
    assert code == 0
    assert data["status"] == "PASS"
    assert data["residuals"]["wdvv1_nonzero"] == "0"


def test_wdvv_check_file_and_failure(capsys, tmp_path):
    from fractions import Fraction as F
    from frobenii.exact import ExpPolynomial
    from frobenii.frobenius import (FrobeniusPotential, catalog,
                                    potential_to_json)
    P = catalog("A3")
    bad = P.F + ExpPolynomial.monomial(3, F(1, 961) - F(1, 960), (0, 0, 5))
    Q = FrobeniusPotential(3, bad, P.d, P.q, P.r, name="A3-broken")
    path = tmp_path / "bad.json"
    path.write_text(potential_to_json(Q), encoding="utf-8")
    code, data = run_cli(capsys, "wdvv", "check", str(path))
    assert code == 1
    assert data["status"] == "FAIL"
    assert data["residuals"]["wdvv1_nonzero"] != "0"


def test_gw_nk_with_csv(capsys, tmp_path):
    csv_path = tmp_path / "nk.csv"
    code, data = run_cli(capsys, "gw", "nk", "--max", "4", "--csv", str(csv_path))
    assert code == 0
    assert data["results"]["N"] == {"1": 1, "2": 1, "3": 12, "4": 620}
    lines = csv_path.read_text().strip().splitlines()
    assert len(lines) == 5


def test_gw_fit(capsys):
    code, data = run_cli(capsys, "gw", "fit", "--max", "24")
    assert code == 0
    assert 0.1 < data["results"]["a_hat"] < 0.2


def test_stokes_braid_word(capsys):
    code, data = run_cli(capsys, "stokes", "braid", "CP2", "--word", "1")
    assert code == 0
    assert data["results"]["canonical_triple"] == ["3", "3", "6"]


def test_stokes_orbit_cap_and_env(capsys, monkeypatch):
    code, data = run_cli(capsys, "stokes", "orbit", "CP2", "--max-size", "200")
    assert code == 0
    assert data["results"]["exceeded"] is True
    monkeypatch.setenv("FROBENII_MAX_ORBIT", "150")
    code, data = run_cli(capsys, "stokes", "orbit", "CP2")
    assert data["inputs"]["max_size"] == 150


def test_stokes_orbit_finite(capsys):
    code, data = run_cli(capsys, "stokes", "orbit", "A3-graph")
    assert code == 0
    assert data["results"]["size"] == 4


def test_stokes_cp2_monodromy(capsys):
    code, data = run_cli(capsys, "stokes", "cp2-monodromy")
    assert code == 0
    assert data["status"] == "PASS"


def test_pvi_verify(capsys):
    code, data = run_cli(capsys, "pvi", "verify", "B3", "--samples", "10",
                         "--tol", "1e-10")
    assert code == 0
    assert data["results"]["max_residual"] == 0.0
    assert data["results"]["mu"] == "-1/3"


def test_pvi_integrate(capsys):
    code, data = run_cli(capsys, "pvi", "integrate", "B3",
                         "--s0", "3/4", "--s1", "9/10", "--tol", "1e-11")
    assert code == 0
    assert data["residuals"]["endpoint_error"] < 1e-6


def test_iso_integrate(capsys, tmp_path):
    import numpy as np
    from frobenii.semisimple import IsoState, state_to_dict
    rng = np.random.default_rng(0)
    W = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    st = IsoState(u=[0j, 1 + 0j, 2.3 + 0.7j], V=W - W.T)
    spath = tmp_path / "state.json"
    ppath = tmp_path / "path.json"
    spath.write_text(json.dumps(state_to_dict(st)), encoding="utf-8")
    ppath.write_text(json.dumps([[[0.1, 0.2], [1.2, 0.1], [2.2, 0.8]],
                                 [[0.0, 0.0], [1.0, 0.0], [2.3, 0.7]]]),
                     encoding="utf-8")
    code, data = run_cli(capsys, "iso", "integrate", "--state", str(spath),
                         "--path", str(ppath), "--tol", "1e-10")
    assert code == 0
    assert data["residuals"]["spectral_drift"] < 1e-8


def test_sing_an(capsys):
    code, data = run_cli(capsys, "sing", "an", "--n", "3")
    assert code == 0
    assert any("1/8" in s for s in data["results"]["flat_substitution"])


def test_usage_error_exit_code(capsys):
    assert main(["catalog", "show", "E8"]) == 2


def test_deterministic_output(capsys):
    code1, d1 = run_cli(capsys, "wdvv", "check", "B3")
    code2, d2 = run_cli(capsys, "wdvv", "check", "B3")
    assert d1 == d2


def test_pvi_verify_csv(capsys, tmp_path):
    path = tmp_path / "trace.csv"
    code, _ = run_cli(capsys, "pvi", "verify", "A3", "--samples", "5",
                      "--csv", str(path))
    assert code == 0
    rows = path.read_text().strip().splitlines()
    assert rows[0] == "s,x,y,residual"
    assert len(rows) == 6
