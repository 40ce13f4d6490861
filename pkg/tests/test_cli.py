"""Command-line interface: exit codes, output formats, config merging."""

import csv
import json
import shutil
import subprocess
import sys
from fractions import Fraction

import pytest

from spectre.cli import main


def run_cli(*argv):
    return main(list(argv))


def test_generate_branching(tmp_path):
    out = tmp_path / "graph.json"
    rc = run_cli(
        "generate", "branching", "--gamma", "1", "--c", "1", "--k-max", "4",
        "--output", str(out),
    )
    assert rc == 0
    data = json.loads(out.read_text())
    assert data["n"] == 23
    assert data["generation"][0] == 1
    assert "interior" in data  # the last generation is a truncation rim


def test_generate_to_stdout(capsys):
    rc = run_cli("generate", "complete", "--n", "4")
    assert rc == 0
    data = json.loads(capsys.readouterr().out)
    assert data["n"] == 4
    assert len(data["edges"]) == 6
    assert "interior" not in data


def test_generate_missing_parameters(capsys):
    rc = run_cli("generate", "complete")
    assert rc == 2
    assert "--n" in capsys.readouterr().err


def test_generate_gamma_spellings(capsys):
    # decimal strings are exact, so "0.5" is fine; word salad is not
    rc = run_cli("generate", "branching", "--gamma", "0.5", "--c", "1", "--k-max", "3")
    assert rc == 0
    assert json.loads(capsys.readouterr().out)["n"] == 7
    rc = run_cli("generate", "branching", "--gamma", "half", "--c", "1", "--k-max", "3")
    assert rc == 2
    assert "rational" in capsys.readouterr().err


def test_missing_family(capsys):
    rc = run_cli("cheeger")
    assert rc == 2
    assert "family" in capsys.readouterr().err


def test_family_and_input_conflict(tmp_path, capsys):
    src = tmp_path / "g.json"
    src.write_text('{"n": 2, "edges": [[0, 1]]}\n')
    rc = run_cli("cheeger", "complete", "--n", "3", "--input", str(src))
    assert rc == 2
    assert "not both" in capsys.readouterr().err


def test_input_round_trip(tmp_path, capsys):
    src = tmp_path / "g.json"
    rc = run_cli("generate", "complete", "--n", "5", "--output", str(src))
    assert rc == 0
    rc = run_cli("spectrum", "--input", str(src))
    assert rc == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["dimension"] == 5


def test_cheeger_payload(capsys):
    rc = run_cli("cheeger", "tessellation", "--p", "3", "--q", "7", "--layers", "2")
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert list(payload) == ["lower_dka", "lower_tess", "upper", "witness", "method"]
    assert payload["lower_tess"] == "1/7"
    assert payload["method"] == "enumeration"
    assert Fraction(payload["upper"]) >= Fraction(1, 7)
    assert isinstance(payload["witness"], list)


def test_cheeger_with_ball(capsys):
    rc = run_cli(
        "cheeger", "branching", "--gamma", "1", "--c", "1", "--k-max", "4",
        "--extend-stubs", "--ball", "2",
    )
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    # beyond the 2-ball: generations 3 and 4, ratios 3/8 and 15/32
    assert payload["lower_dka"] == "3/8"


def test_spectrum_default_variant(capsys):
    rc = run_cli("spectrum", "complete", "--n", "6")
    assert rc == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["variant"] == "delta"
    assert summary["method"] == "dense"
    assert summary["lambda_min"] == pytest.approx(0.0, abs=1e-10)
    assert summary["lambda_max"] == pytest.approx(6.0, abs=1e-10)
    assert set(summary) == {
        "variant", "dimension", "lambda_min", "lambda_max", "residual_min",
        "residual_max", "iterations", "converged", "method",
    }


def test_spectrum_annulus_and_dump(tmp_path, capsys):
    prefix = str(tmp_path / "mat")
    rc = run_cli(
        "spectrum", "branching", "--gamma", "1", "--c", "1", "--k-max", "3",
        "--extend-stubs", "--inner", "1", "--outer", "2", "--dump", prefix,
    )
    assert rc == 0
    summary = json.loads(capsys.readouterr().out)
    # the generation-2 annulus is [[4, -1], [-1, 4]]
    assert summary["dimension"] == 2
    assert summary["lambda_min"] == pytest.approx(3.0, abs=1e-10)
    assert summary["lambda_max"] == pytest.approx(5.0, abs=1e-10)
    coo = (tmp_path / "mat.coo").read_text().splitlines()
    assert coo[0].split() == ["0", "0", "4"]
    assert len(coo) == 4
    weights = (tmp_path / "mat.weights").read_text().splitlines()
    assert len(weights) == 2


def test_spectrum_annulus_needs_both_ends(capsys):
    rc = run_cli(
        "spectrum", "branching", "--gamma", "1", "--c", "1", "--k-max", "3",
        "--inner", "1",
    )
    assert rc == 2
    assert "--inner and --outer" in capsys.readouterr().err


def test_spectrum_run_error_exit(capsys):
    rc = run_cli(
        "spectrum", "branching", "--gamma", "1", "--c", "1", "--k-max", "3",
        "--extend-stubs", "--inner", "30", "--outer", "31",
    )
    assert rc == 1
    assert "empty" in capsys.readouterr().err


def test_curvature_csv(tmp_path):
    out = tmp_path / "curv.csv"
    rc = run_cli(
        "curvature", "tessellation", "--p", "3", "--q", "7", "--layers", "2",
        "--output", str(out),
    )
    assert rc == 0
    rows = list(csv.DictReader(out.read_text().splitlines()))
    assert rows
    assert all(row["curvature"] == "-1/6" for row in rows)


def test_curvature_without_faces_fails(capsys):
    rc = run_cli("curvature", "tree", "--branching", "2", "--depth", "3")
    assert rc == 1
    assert capsys.readouterr().err.startswith("spectre:")


def test_sweep_tessellation(tmp_path):
    out = tmp_path / "sweep.csv"
    rc = run_cli(
        "sweep", "tessellation", "--p", "3", "--q", "7", "--layers", "4",
        "--output", str(out),
    )
    assert rc == 0
    rows = list(csv.DictReader(out.read_text().splitlines()))
    assert [(row["k"], row["R"]) for row in rows] == [("0", "3"), ("1", "3"), ("2", "3")]
    assert all(row["alpha_tess"] == "1/7" for row in rows)
    assert all(row["kappa_K"] == "-1/6" for row in rows)
    assert all(row["theory_alpha_lower"] == "" for row in rows)


def test_sweep_explicit_schedule(tmp_path):
    out = tmp_path / "sweep.csv"
    rc = run_cli(
        "sweep", "branching", "--gamma", "1", "--c", "1", "--k-max", "4",
        "--extend-stubs", "--schedule", "1:4,3:4", "--output", str(out),
    )
    assert rc == 0
    rows = list(csv.DictReader(out.read_text().splitlines()))
    assert len(rows) == 2
    assert rows[1]["alpha_dka"] == "15/32"
    assert rows[1]["theory_alpha_upper"] == "17/32"


def test_sweep_schedule_parse_error(capsys):
    rc = run_cli(
        "sweep", "branching", "--gamma", "1", "--c", "1", "--k-max", "4",
        "--extend-stubs", "--schedule", "1-4",
    )
    assert rc == 2
    assert "k:R" in capsys.readouterr().err


def test_sweep_deterministic_across_threads(tmp_path):
    args = [
        "sweep", "branching", "--gamma", "1", "--c", "1", "--k-max", "4",
        "--extend-stubs",
    ]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli(*args, "--threads", "1", "--output", str(a)) == 0
    assert run_cli(*args, "--threads", "3", "--output", str(b)) == 0
    assert a.read_bytes() == b.read_bytes()


def test_threads_env_fallback(tmp_path, monkeypatch):
    monkeypatch.setenv("SPECTRE_THREADS", "2")
    out = tmp_path / "sweep.csv"
    rc = run_cli(
        "sweep", "branching", "--gamma", "1", "--c", "1", "--k-max", "4",
        "--extend-stubs", "--output", str(out),
    )
    assert rc == 0


def test_threads_must_be_positive(capsys):
    rc = run_cli(
        "sweep", "branching", "--gamma", "1", "--c", "1", "--k-max", "4",
        "--extend-stubs", "--threads", "0",
    )
    assert rc == 2
    assert "positive" in capsys.readouterr().err


def test_config_supplies_missing_flags(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"p": 3, "q": 7, "layers": 2}\n')
    rc = run_cli("cheeger", "tessellation", "--config", str(cfg))
    assert rc == 0
    assert json.loads(capsys.readouterr().out)["lower_tess"] == "1/7"


def test_explicit_flag_beats_config(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"p": 3, "q": 7, "layers": 2}\n')
    rc = run_cli("cheeger", "tessellation", "--q", "8", "--config", str(cfg))
    assert rc == 0
    assert json.loads(capsys.readouterr().out)["lower_tess"] == "1/4"


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"frobnicate": 1}\n')
    rc = run_cli("cheeger", "tessellation", "--p", "3", "--q", "7", "--layers", "2",
                 "--config", str(cfg))
    assert rc == 2
    assert "unknown keys" in capsys.readouterr().err


def test_config_invalid_json(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text("{broken")
    rc = run_cli("verify", "--config", str(cfg))
    assert rc == 2
    assert "invalid JSON" in capsys.readouterr().err


def test_config_missing_file(capsys):
    rc = run_cli("verify", "--config", "/no/such/file.json")
    assert rc == 2
    assert "cannot read config" in capsys.readouterr().err


def test_verify_command(capsys):
    rc = run_cli("verify", "--threads", "4")
    out = capsys.readouterr().out
    assert rc == 0
    assert "FAIL" not in out
    assert out.strip().endswith("11/11 checks passed")


def test_unknown_subcommand():
    with pytest.raises(SystemExit):
        run_cli("explode")


def test_console_script(tmp_path):
    exe = shutil.which("spectre")
    cmd = [exe] if exe else [sys.executable, "-m", "spectre.cli"]
    out = subprocess.run(
        cmd + ["generate", "complete", "--n", "4"], capture_output=True, text=True
    )
    assert out.returncode == 0
    assert json.loads(out.stdout)["n"] == 4
