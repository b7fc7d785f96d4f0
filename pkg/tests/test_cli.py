import json

from hypersusy.cli import main


def test_families_listing(capsys):
    assert main(["families"]) == 0
    out = capsys.readouterr().out
    for kind in ("const", "linear", "one_minus_s2", "s2_minus_one", "s2", "s2_plus_one"):
        assert kind in out
    assert "Coulomb potential" in out
    assert "pure-power weights" in out


def test_families_json(capsys):
    assert main(["families", "--json"]) == 0
    blob = json.loads(capsys.readouterr().out)
    assert len(blob["families"]) == 6
    assert len(blob["weight_powers"]) == 5
    assert len(blob["catalog"]) == 10


def test_families_catalog_entry(capsys):
    assert main(["families", "--catalog", "7", "--json"]) == 0
    blob = json.loads(capsys.readouterr().out)
    assert blob["name"] == "Coulomb potential"
    assert blob["kind"] == "linear"
    assert blob["tau"] == "beta"
    assert blob["k"] == "beta - 1"


def test_families_catalog_entry_text(capsys):
    assert main(["families", "--catalog", "7"]) == 0
    out = capsys.readouterr().out
    assert "Coulomb potential" in out and "beta - 1" in out


def test_derive_writes_csv_and_meta(tmp_path, capsys):
    out = tmp_path / "grid.csv"
    meta = tmp_path / "meta.json"
    svg = tmp_path / "plot.svg"
    code = main([
        "derive", "--kind", "const", "--alpha", "-2", "--beta", "0",
        "--m", "0", "--gamma", "2", "--levels", "1,2",
        "--x-min", "-6", "--x-max", "6", "--n", "1201",
        "--out", str(out), "--meta", str(meta), "--svg", str(svg),
    ])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "x,s,V_upper,V_partner,W,psi_1,psi_2"
    assert len(lines) == 1202
    mid = dict(zip(lines[0].split(","), lines[601].split(",")))
    assert abs(float(mid["x"])) < 1e-12
    assert abs(float(mid["W"]) - 0.5) < 1e-12
    blob = json.loads(meta.read_text())
    assert blob["lambda_targets"] == [2.0, 4.0]
    assert abs(blob["gamma_rays"]["right_start"] - 0.8862269254527579) < 1e-9
    assert svg.read_text().startswith("<svg")


def test_derive_json_format(tmp_path):
    out = tmp_path / "grid.json"
    code = main([
        "derive", "--kind", "linear", "--alpha", "-1", "--beta", "1",
        "--gamma", "inf", "--x-min", "0.1", "--x-max", "8", "--n", "51",
        "--out", str(out), "--format", "json",
    ])
    assert code == 0
    blob = json.loads(out.read_text())
    assert set(blob) == {"x", "s", "V_upper", "V_partner", "W"}


def test_derive_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "job.json"
    cfg.write_text(json.dumps({
        "kind": "const", "alpha": -2, "beta": 0, "m": 0, "gamma": "inf",
        "grid": {"x_min": -5, "x_max": 5, "n": 11},
        "out": str(tmp_path / "a.csv"),
    }))
    out = tmp_path / "b.csv"
    assert main(["derive", "--config", str(cfg), "--out", str(out)]) == 0
    assert out.exists()


def test_derive_inadmissible_gamma_exit_3(tmp_path, capsys):
    code = main([
        "derive", "--kind", "const", "--alpha", "-2", "--beta", "0",
        "--gamma", "0", "--x-min", "-6", "--x-max", "6",
        "--out", str(tmp_path / "x.csv"),
    ])
    assert code == 3
    err = capsys.readouterr().err
    assert "0.8862" in err and "-0.8862" in err


def test_derive_bad_parameters_exit_2(tmp_path, capsys):
    code = main([
        "derive", "--kind", "one_minus_s2", "--alpha", "1", "--beta", "0",
        "--x-min", "0.1", "--x-max", "3", "--out", str(tmp_path / "x.csv"),
    ])
    assert code == 2
    assert "alpha < beta < -alpha" in capsys.readouterr().err


def test_derive_missing_required_exit_2(tmp_path, capsys):
    assert main(["derive", "--kind", "const", "--alpha", "-2"]) == 2


def test_verify_algebra_suite(capsys):
    assert main(["verify", "--suite", "algebra"]) == 0
    assert "PASS" in capsys.readouterr().out


def test_verify_riccati_json(capsys):
    assert main(["verify", "--suite", "riccati", "--json"]) == 0
    blob = json.loads(capsys.readouterr().out)
    assert blob["ok"] is True
    assert blob["max_residual"] <= 1e-9


def test_verify_failure_exit_1(monkeypatch, capsys):
    from hypersusy import verify

    monkeypatch.setitem(verify._SUITES, "riccati", lambda: {"ok": False, "failures": [("x",)]})
    assert main(["verify", "--suite", "riccati"]) == 1


def test_numerical_failure_exit_4(tmp_path, monkeypatch, capsys):
    from hypersusy import schrodinger
    from hypersusy.errors import NoConvergence

    def boom(*args, **kwargs):
        raise NoConvergence("integral did not settle")

    monkeypatch.setattr(schrodinger, "grid_frame", boom)
    code = main([
        "derive", "--kind", "const", "--alpha", "-2", "--beta", "0",
        "--gamma", "inf", "--x-min", "-6", "--x-max", "6",
        "--out", str(tmp_path / "x.csv"),
    ])
    assert code == 4
