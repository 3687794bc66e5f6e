"""Command-line interface: outputs, exit codes, and config round-trips."""
import json
import math
import os

import pytest

from radialbc.cli import main, parse_bc, parse_potential, rerun_argv
from radialbc.errors import ConfigError
from radialbc.potentials import Coulomb, Harmonic, SphericalWell, SumPotential
from radialbc.solver import DirichletOrigin, MixedSAE


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --------------------------------------------------------------------------
# token parsing


def test_parse_potential_grammar():
    assert parse_potential("coulomb:Z=1.5", mass=1.0) == Coulomb(Z=1.5)
    assert parse_potential("harmonic:omega=2.0", mass=3.0) == Harmonic(omega=2.0, mass=3.0)
    combo = parse_potential("coulomb:Z=1+well:depth=2,radius=0.5", mass=1.0)
    assert isinstance(combo, SumPotential)
    assert combo.parts == (Coulomb(Z=1.0), SphericalWell(depth=2.0, radius=0.5))


def test_parse_potential_rejects_unknown_tokens():
    with pytest.raises(ConfigError):
        parse_potential("yukawa:g=1", mass=1.0)
    with pytest.raises(ConfigError):
        parse_potential("coulomb:Z=1,extra=2", mass=1.0)


def test_parse_bc_grammar():
    assert parse_bc("dirichlet") == DirichletOrigin()
    sae = parse_bc("sae:theta=0.785,L=2.0")
    assert isinstance(sae, MixedSAE)
    assert sae.theta == 0.785 and sae.L == 2.0
    with pytest.raises(ConfigError):
        parse_bc("neumann")


# --------------------------------------------------------------------------
# spectrum command


def test_spectrum_coulomb_json(capsys):
    code, out, err = run(capsys, "spectrum", "--potential", "coulomb:Z=1", "--levels", "2")
    assert code == 0
    doc = json.loads(out)
    es = [row["E"] for row in doc["results"]["levels"]]
    assert es[0] == pytest.approx(-0.5, rel=1e-8)
    assert es[1] == pytest.approx(-0.125, rel=1e-8)


def test_spectrum_harmonic_csv(capsys):
    code, out, err = run(capsys, "spectrum", "--potential", "harmonic:omega=1",
                         "--l", "1", "--format", "csv")
    assert code == 0
    body = [ln for ln in out.splitlines() if ln and not ln.startswith("#")]
    assert body[0] == "n_r,E,match_defect,node_count"
    first = body[1].split(",")
    assert float(first[1]) == pytest.approx(2.5, rel=1e-8)


def test_spectrum_relativistic_flag(capsys):
    code, out, err = run(capsys, "spectrum", "--potential", "coulomb:Z=0.2", "--kg")
    assert code == 0
    doc = json.loads(out)
    assert doc["config"]["kg"] == "true"
    assert doc["results"]["levels"][0]["E"] == pytest.approx(0.9789063129307033, rel=1e-7)


def test_spectrum_json_rerun_is_bit_exact(capsys):
    code, out, _ = run(capsys, "spectrum", "--potential", "coulomb:Z=1",
                       "--levels", "2", "--l", "1")
    assert code == 0
    argv = rerun_argv(json.loads(out)["config"])
    code2, out2, _ = run(capsys, *argv)
    assert code2 == 0
    assert out2 == out


def test_sae_spectrum_rerun_with_negative_window(capsys):
    # '=' joined flags are required here: a bare '-1e6,...' reads as a flag
    code, out, _ = run(capsys, "spectrum", "--potential", "invsq:g=-0.08",
                       "--bc", "sae:theta=0.7853981633974483,L=1.0",
                       "--window=-1e6,-1e-6")
    assert code == 0
    argv = rerun_argv(json.loads(out)["config"])
    assert any(a.startswith("--window=-1") for a in argv)  # '=' form, not a pair
    code2, out2, _ = run(capsys, *argv)
    assert code2 == 0
    assert out2 == out


def test_emit_wavefunctions(tmp_path, capsys):
    wf = tmp_path / "wf"
    code, out, _ = run(capsys, "spectrum", "--potential", "coulomb:Z=1",
                       "--levels", "2", "--emit-wavefunctions", str(wf))
    assert code == 0
    files = sorted(os.listdir(wf))
    assert files == ["level_000.csv", "level_001.csv"]
    lines = (wf / "level_000.csv").read_text().splitlines()
    header = [ln for ln in lines if ln.startswith("#")]
    assert any("E=" in ln for ln in header)
    r0, u0 = (float(v) for v in lines[-1].split(","))
    assert r0 > 0


# --------------------------------------------------------------------------
# config files


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# sample run\n"
        "potential = coulomb:Z=1\n"
        "levels = 1\n"
        "l = 0\n"
    )
    code, out, _ = run(capsys, "spectrum", "--config", str(cfg), "--l", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["config"]["l"] == "1"  # flag wins over file
    assert doc["results"]["levels"][0]["E"] == pytest.approx(-0.125, rel=1e-8)


def test_config_file_bad_line(tmp_path, capsys):
    cfg = tmp_path / "broken.cfg"
    cfg.write_text("potential coulomb:Z=1\n")
    code, out, err = run(capsys, "spectrum", "--config", str(cfg))
    assert code == 2
    assert "error:" in err


# --------------------------------------------------------------------------
# indicial command


def test_indicial_csv_table(capsys):
    code, out, _ = run(capsys, "indicial", "--l", "0..1", "--two-m-v0", "0,-0.16")
    assert code == 0
    body = [ln for ln in out.splitlines() if ln and not ln.startswith("#")]
    assert body[0].startswith("l,two_m_V0,P")
    assert len(body) == 1 + 4  # header + 2 l values x 2 strengths
    row = body[1].split(",")
    assert int(row[0]) == 0 and float(row[2]) == pytest.approx(0.5)


# --------------------------------------------------------------------------
# diagnose command


def test_diagnose_analytic_power(capsys):
    code, out, _ = run(capsys, "diagnose", "--power", "2,0")
    assert code == 0
    doc = json.loads(out)
    assert doc["results"]["verdict"] == "point-source"
    assert doc["results"]["strength"] == pytest.approx(2.0, rel=1e-6)


def test_diagnose_computed_level(capsys):
    code, out, _ = run(capsys, "diagnose", "--potential", "coulomb:Z=1", "--level", "0")
    assert code == 0
    doc = json.loads(out)
    assert doc["results"]["verdict"] == "source-free"


def test_diagnose_rerun_is_bit_exact(capsys):
    code, out, _ = run(capsys, "diagnose", "--power=-3,0", "--a-start", "0.5")
    assert code == 0
    argv = rerun_argv(json.loads(out)["config"])
    code2, out2, _ = run(capsys, *argv)
    assert code2 == 0
    assert out2 == out


def test_diagnose_divergent_volume_is_physics_error(capsys):
    code, out, err = run(capsys, "diagnose", "--power", "1,0", "--l", "1")
    assert code == 3
    assert "DivergentVolumeError" in err


# --------------------------------------------------------------------------
# compare command


def test_compare_shows_sae_binding_where_dirichlet_fails(capsys):
    code, out, _ = run(capsys, "compare", "--potential", "invsq:g=-0.08",
                       "--thetas", str(math.pi / 4), "--format", "json")
    assert code == 0
    doc = json.loads(out)
    names = doc["results"]["columns"]
    assert names[0] == "dirichlet"
    sae_name = names[-1]
    assert sae_name.startswith("sae:theta=")
    energies = doc["results"]["energies"]
    assert energies["dirichlet"] == [None]
    assert energies[sae_name][0] == pytest.approx(-11.033310789811649, rel=1e-6)


def test_compare_table_format(capsys):
    code, out, _ = run(capsys, "compare", "--potential", "coulomb:Z=1",
                       "--levels", "2", "--format", "table")
    assert code == 0
    lines = out.splitlines()
    assert "dirichlet" in lines[0]
    first_cell = float(lines[2].split()[1])
    assert first_cell == pytest.approx(-0.5, rel=1e-6)


# --------------------------------------------------------------------------
# exit codes


def test_unknown_flag_is_config_error(capsys):
    code, out, err = run(capsys, "spectrum", "--no-such-flag", "1")
    assert code == 2


def test_missing_potential_is_config_error(capsys):
    code, out, err = run(capsys, "spectrum")
    assert code == 2
    assert "potential" in err


def test_fall_to_center_is_physics_error(capsys):
    code, out, err = run(capsys, "spectrum", "--potential", "invsq:g=-0.5")
    assert code == 3
    assert "FallToCenterError" in err


def test_unbracketed_level_is_numerics_error(capsys):
    code, out, err = run(capsys, "spectrum", "--potential",
                         "well:depth=1,radius=1")
    assert code == 4
    assert "BracketError" in err


def test_bad_float_is_config_error(capsys):
    code, out, err = run(capsys, "spectrum", "--potential", "coulomb:Z=abc")
    assert code == 2


def test_out_file_writes_report(tmp_path, capsys):
    path = tmp_path / "report.json"
    code, out, _ = run(capsys, "spectrum", "--potential", "coulomb:Z=1",
                       "--out", str(path))
    assert code == 0
    assert out == ""
    doc = json.loads(path.read_text())
    assert doc["results"]["levels"][0]["E"] == pytest.approx(-0.5, rel=1e-8)
