import csv
import json
import math

import pytest

from qroulette import cli, operators
from qroulette.cli import main, parse_angle


def run_json(capsys, *argv):
    assert main(list(argv)) == 0
    return json.loads(capsys.readouterr().out)


@pytest.mark.parametrize(
    "text, value",
    [("pi", math.pi), ("pi/2", math.pi / 2), ("2pi/3", 2 * math.pi / 3), ("-0.5*pi", -math.pi / 2), ("1.25", 1.25)],
)
def test_parse_angle(text, value):
    assert parse_angle(text) == pytest.approx(value, abs=1e-15)


def test_simulate_one_bullet(capsys):
    out = run_json(capsys, "simulate", "--players", "3", "--gammas", "pi,0,pi")
    dist = out["result"]["distribution"]
    assert dist["101"] == pytest.approx(1.0, abs=1e-12)
    assert sum(v for k, v in dist.items() if k != "101") < 1e-12
    assert out["manifest"]["config"]["players"] == 3


def test_simulate_gamma_count_mismatch(capsys):
    assert main(["simulate", "--players", "3", "--rounds", "2", "--gammas", "pi,0,pi"]) == 2
    assert "6 entries" in capsys.readouterr().err


def test_simulate_payoffs(capsys):
    out = run_json(capsys, "simulate", "--players", "2", "--gammas", "pi,pi", "--payoff", "sole-survivor")
    assert out["result"]["payoffs"] == [0.5, 0.5]
    out = run_json(capsys, "simulate", "--players", "2", "--gammas", "pi,0", "--payoff", "zero-sum")
    assert out["result"]["payoffs"] == pytest.approx([1.0, -1.0], abs=1e-12)


def test_simulate_degrees(capsys):
    rad = run_json(capsys, "simulate", "--players", "2", "--gammas", "pi/2,pi/3", "--alpha", "0.5")
    deg = run_json(capsys, "simulate", "--players", "2", "--gammas", "90,60", "--alpha", "28.64788975654116", "--degrees")
    for k, v in rad["result"]["distribution"].items():
        assert deg["result"]["distribution"][k] == pytest.approx(v, abs=1e-12)


def test_simulate_trace(capsys):
    out = run_json(
        capsys, "simulate", "--players", "3", "--rounds", "2", "--gammas", "0,pi,pi,0,pi,pi", "--trace"
    )
    trace = out["result"]["trace"]
    assert [t["round"] for t in trace] == [1, 2]
    assert trace[0]["distribution"]["011"] == pytest.approx(1.0, abs=1e-12)
    assert trace[1]["distribution"]["111"] == pytest.approx(1.0, abs=1e-12)


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "game.json"
    cfg.write_text(json.dumps({"players": 2, "rounds": 1, "bullet_probs": [1.0, 1.0], "alpha": 0.1}))
    out = run_json(capsys, "simulate", "--config", str(cfg))
    assert out["result"]["distribution"]["01"] == pytest.approx(1.0)
    out = run_json(capsys, "simulate", "--config", str(cfg), "--gammas", "pi,pi")
    assert out["result"]["distribution"]["11"] == pytest.approx(1.0)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"players": 2, "colour": "red"}))
    assert main(["simulate", "--config", str(bad)]) == 2
    assert main(["simulate", "--config", str(tmp_path / "missing.json")]) == 2


def test_bullet_probability_out_of_range():
    assert main(["simulate", "--players", "2", "--bullet-probs", "0.5,1.5"]) == 2


def test_csv_and_json_carry_identical_values(tmp_path):
    j, c = tmp_path / "a.json", tmp_path / "a.csv"
    base = ["simulate", "--players", "3", "--gammas", "0.3,1.1,2.9", "--alpha", "0.4", "--beta", "1.3"]
    assert main(base + ["--output", str(j)]) == 0
    assert main(base + ["--output", str(c), "--format", "csv"]) == 0
    dist = json.loads(j.read_text())["result"]["distribution"]
    rows = list(csv.DictReader(c.open()))
    assert {r["outcome"]: float(r["probability"]) for r in rows} == dist
    assert json.loads((tmp_path / "a.csv.manifest.json").read_text())["command"] == "simulate"


def test_average_grid_19_over_64(capsys):
    out = run_json(
        capsys, "average", "--players", "3", "--rounds", "2", "--gamma", "pi/2", "--outcomes", "111", "--nodes", "13"
    )
    assert out["result"]["111"]["mean"] == pytest.approx(19 / 64, abs=1e-12)
    assert out["manifest"]["method"] == "grid"


def test_average_monte_carlo(capsys):
    out = run_json(
        capsys, "average", "--players", "2", "--gammas", "pi,pi", "--method", "mc", "--samples", "100", "--seed", "3"
    )
    assert out["result"]["11"]["mean"] == pytest.approx(1.0, abs=1e-12)
    assert out["manifest"]["seed"] == 3


def test_average_grid_rejects_gamma_randomization(capsys):
    assert main(["average", "--players", "2", "--gamma", "1", "--randomize-gammas"]) == 2


def test_table1_small_run(capsys):
    code = main(["table1", "--players", "3", "--samples", "10", "--seed", "1"])
    line = capsys.readouterr().out
    assert "n=3" in line and "std_err=" in line and "target=0.1765559378913951" in line
    assert code in (0, 1)


def test_table1_full_sample_passes(capsys):
    assert main(["table1", "--players", "3", "--samples", "1000000"]) == 0
    assert "PASS" in capsys.readouterr().out


def test_figures_csv(tmp_path):
    path = tmp_path / "fig2.csv"
    assert main(["figures", "--figure", "2", "--rounds", "25", "--output", str(path)]) == 0
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == 75
    assert list(rows[0]) == ["round", "outcome", "probability"]
    assert {r["outcome"] for r in rows} == {"100", "010", "001"}


def test_figure1_peak_round(tmp_path):
    path = tmp_path / "fig1.csv"
    assert main(["figures", "--figure", "1", "--output", str(path)]) == 0
    rows = [r for r in csv.DictReader(path.open()) if r["outcome"] == "111"]
    best = max(rows, key=lambda r: float(r["probability"]))
    assert best["round"] == "3"


def test_figure3_second_player_average(tmp_path):
    path = tmp_path / "fig3.csv"
    assert main(["figures", "--figure", "3", "--output", str(path)]) == 0
    vals = [float(r["probability"]) for r in csv.DictReader(path.open()) if r["outcome"] == "0100"]
    assert sum(vals) / len(vals) == pytest.approx(0.039, abs=0.005)


def test_figures_unwritable_path(tmp_path):
    assert main(["figures", "--figure", "2", "--rounds", "2", "--output", str(tmp_path / "no" / "x.csv")]) == 3


def test_classical_command(capsys):
    out = run_json(capsys, "classical", "--players", "3", "--bullet-probs", "0,1,1")
    assert out["result"]["distribution"]["100"] == 1.0
    out = run_json(capsys, "classical", "--players", "3", "--bullet-probs", "0.5,0.5,0.5")
    assert out["result"]["distribution"]["111"] == 0.125


def test_verify_filter(capsys):
    assert main(["verify", "--filter", "two_player_table"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 4 and "table1" not in out
    assert main(["verify", "--filter", "nothing-matches"]) == 2


def test_verify_detects_corrupted_gate(monkeypatch, capsys):
    real = operators.single_qubit_u

    def flipped(p):
        u = real(p)
        u[0, 1] = -u[0, 1]
        return u

    monkeypatch.setattr(operators, "single_qubit_u", flipped)
    assert main(["verify", "--filter", "unitarity"]) == 1
    assert "FAIL  unitarity.dense" in capsys.readouterr().out


def test_identical_runs_identical_output(tmp_path, monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "0")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["average", "--players", "3", "--rounds", "2", "--gamma", "pi/2", "--method", "mc", "--samples", "5000"]
    monkeypatch.setenv("QROULETTE_THREADS", "1")
    assert main(argv + ["--output", str(a)]) == 0
    monkeypatch.setenv("QROULETTE_THREADS", "8")
    assert main(argv + ["--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_cli_module_exposes_main():
    assert callable(cli.main)
