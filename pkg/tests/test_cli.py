import json

import numpy as np
import pytest

from logitdyn.cli import main, parse_and_validate, run
from logitdyn.output import read_density_csv

from conftest import XHAT_REFINED


def test_nash_defaults():
    spec = parse_and_validate(["nash"])
    assert (spec.params.alpha, spec.params.beta, spec.params.gamma) == (1.0, 1.0, 1.0)
    assert spec.tol == 1e-10


def test_simulate_inherits_reference_setup():
    spec = parse_and_validate(["simulate", "--q", "1", "--eta", "0.007"])
    assert spec.n_cells == 200 and spec.dt == 0.1
    assert spec.settings.q == 1.0 and spec.settings.eta == 0.007
    assert spec.init == "uniform"


@pytest.mark.parametrize(
    "argv",
    [
        ["simulate", "--eta", "-1"],
        ["simulate", "--q", "0.5"],
        ["simulate", "--dt", "1.5"],
        ["simulate", "--cells", "1"],
        ["simulate", "--init", "peak:2"],
        ["simulate", "--bogus", "1"],
        ["sweep", "--etas", "0.1,abc"],
        ["asymptotic", "--q", "1"],
        ["nash", "--alpha", "nan"],
    ],
)
def test_invalid_input_exits_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        parse_and_validate(argv)
    assert exc.value.code == 2
    assert "error" in capsys.readouterr().err


def test_error_names_offending_key(capsys):
    with pytest.raises(SystemExit):
        parse_and_validate(["simulate", "--eta", "-1"])
    assert "--eta" in capsys.readouterr().err


def test_config_precedence(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"eta": 0.05, "q": 1.2, "max-steps": 500, "cells": 100}))
    spec = parse_and_validate(["simulate", "--config", str(cfg), "--eta", "0.02"])
    assert spec.settings.eta == 0.02  # flag beats config
    assert spec.settings.q == 1.2  # config beats default
    assert spec.max_steps == 500 and spec.n_cells == 100
    assert spec.dt == 0.1  # default


def test_config_list_values(tmp_path):
    cfg = tmp_path / "sweep.json"
    cfg.write_text(json.dumps({"etas": [0.1, 0.01], "qs": "1,1.2"}))
    spec = parse_and_validate(["sweep", "--config", str(cfg)])
    assert spec.etas == [0.1, 0.01] and spec.qs == [1.0, 1.2]


@pytest.mark.parametrize(
    "content, needle",
    [
        (json.dumps({"etaa": 0.1}), "etaa"),
        (json.dumps({"eta": -3}), "--eta"),
        ("{not json", "not valid JSON"),
        (json.dumps([1, 2]), "flat JSON object"),
    ],
)
def test_bad_config(tmp_path, capsys, content, needle):
    cfg = tmp_path / "bad.json"
    cfg.write_text(content)
    with pytest.raises(SystemExit) as exc:
        parse_and_validate(["simulate", "--config", str(cfg)])
    assert exc.value.code == 2
    assert needle in capsys.readouterr().err


def test_nash_command(tmp_path, capsys):
    assert main(["nash", "--out", str(tmp_path)]) == 0
    assert "0.531" in capsys.readouterr().out
    record = json.loads((tmp_path / "nash.json").read_text())
    assert record["nash_x"] == pytest.approx(XHAT_REFINED, abs=1e-10)


SUMMARY_KEYS = {
    "alpha", "beta", "gamma", "q", "eta", "n_cells", "dt", "steps_taken", "converged",
    "l1_residual", "nash_x", "mode_x", "mean", "variance", "mass_near_nash",
    "wasserstein_to_nash", "entropy",
}


def test_simulate_command_writes_files(tmp_path):
    code = main(["simulate", "--eta", "0.1", "--out", str(tmp_path), "--snapshot-every", "100"])
    assert code == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert SUMMARY_KEYS <= set(summary)
    assert summary["converged"] is True
    d = read_density_csv(tmp_path / "density.csv")
    assert d.grid.n_cells == 200
    assert summary["mode_x"] == float(d.grid.centers[np.argmax(d.values)])
    header = (tmp_path / "density_trajectory.csv").read_text().splitlines()[0]
    assert header == "t,x,density"


def test_density_csv_format(tmp_path):
    main(["steady", "--eta", "0.1", "--cells", "4", "--out", str(tmp_path)])
    lines = (tmp_path / "density.csv").read_text().splitlines()
    assert lines[0] == "x,density"
    assert [float(l.split(",")[0]) for l in lines[1:]] == [0.125, 0.375, 0.625, 0.875]


def test_nonconvergence_exit_code(tmp_path):
    assert main(["simulate", "--eta", "0.007", "--max-steps", "1", "--out", str(tmp_path)]) == 1
    assert json.loads((tmp_path / "summary.json").read_text())["converged"] is False


def test_peak_init(tmp_path):
    assert main(["simulate", "--eta", "0.1", "--init", "peak:0.9", "--out", str(tmp_path)]) == 0


def test_asymptotic_command(tmp_path):
    assert main(["asymptotic", "--q", "1.2", "--out", str(tmp_path)]) == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["eta"] is None
    assert 1.0 <= summary["exp_moment"] <= np.e
    assert summary["l1_residual"] < 1e-8


def test_verify_command(tmp_path, capsys):
    assert main(["verify", "--trials", "1000", "--seed", "42", "--out", str(tmp_path)]) == 0
    assert capsys.readouterr().out.startswith("pass")
    report = json.loads((tmp_path / "verify.json").read_text())
    assert report["passed"] is True and report["seed"] == 42


def test_sweep_reproduces_fig1a_files(tmp_path):
    assert main(["sweep", "--qs", "1", "--etas", "0.1,0.01,0.007", "--out", str(tmp_path)]) == 0
    for eta in ("0.1", "0.01", "0.007"):
        d = read_density_csv(tmp_path / f"density_q1.0_eta{eta}.csv")
        assert abs(d.mass - 1) < 1e-12
    rows = (tmp_path / "sweep_summary.csv").read_text().splitlines()
    assert len(rows) == 4
    assert rows[0].startswith("alpha,beta,gamma,q,eta,n_cells,dt,steps_taken,converged")


def test_determinism_and_sweep_isolation(tmp_path):
    a, b, c = tmp_path / "a", tmp_path / "b", tmp_path / "c"
    main(["sweep", "--qs", "1,1.2", "--etas", "0.1,0.01", "--out", str(a)])
    main(["sweep", "--qs", "1,1.2", "--etas", "0.1,0.01", "--out", str(b)])
    main(["sweep", "--qs", "1.2,1", "--etas", "0.01,0.1", "--out", str(c), "--jobs", "2"])
    for f in sorted(a.glob("density_*.csv")):
        assert f.read_bytes() == (b / f.name).read_bytes()
        assert f.read_bytes() == (c / f.name).read_bytes()
    assert (a / "sweep_summary.csv").read_bytes() == (b / "sweep_summary.csv").read_bytes()
    rows_a = sorted((a / "sweep_summary.csv").read_text().splitlines()[1:])
    rows_c = sorted((c / "sweep_summary.csv").read_text().splitlines()[1:])
    assert rows_a == rows_c


def test_sweep_partial_failure(tmp_path):
    code = main(["sweep", "--qs", "1", "--etas", "0.1,0.007", "--max-steps", "50", "--out", str(tmp_path)])
    assert code == 1
    assert "false" in (tmp_path / "sweep_summary.csv").read_text()


def test_run_accepts_spec_object(tmp_path):
    spec = parse_and_validate(["steady", "--eta", "0.1", "--out", str(tmp_path)])
    assert run(spec) == 0


def test_module_entry_point(tmp_path):
    import subprocess
    import sys

    out = subprocess.run([sys.executable, "-m", "logitdyn", "simulate", "--eta", "0"],
                         capture_output=True, text=True)
    assert out.returncode == 2
