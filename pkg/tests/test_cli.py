"""CLI contract: config validation, CSV schemas, exit codes, determinism."""
import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from extreme_fpt.cli import main, parse_config
from extreme_fpt.errors import ConfigError

BASE_CONFIG = """\
[model]
kind = annulus
dim = 1
sigma = 0
kappa = inf
initial = delta
t_diff = 1.0

[numerics]
cells = 256
dt_initial = 1e-6
t_final = 30
growth = 1.05

[sweep]
n_values = 1,10,100
theta = 0.5
sigma_values = 0.05,0.1,0.2
"""


@pytest.fixture
def config_path(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text(BASE_CONFIG)
    return path


def read_rows(path: Path) -> list[list[str]]:
    lines = path.read_text().strip().splitlines()
    return [line.split(",") for line in lines]


class TestConfigParsing:
    def test_unknown_key_named(self, tmp_path):
        path = tmp_path / "bad.ini"
        path.write_text("[model]\nkind = annulus\nwhatnot = 3\n")
        with pytest.raises(ConfigError, match="whatnot"):
            parse_config(path)

    def test_unknown_section_named(self, tmp_path):
        path = tmp_path / "bad.ini"
        path.write_text("[shenanigans]\nx = 1\n")
        with pytest.raises(ConfigError, match="shenanigans"):
            parse_config(path)

    def test_kappa_inf_literal(self, tmp_path):
        path = tmp_path / "run.ini"
        path.write_text("[model]\nkind = annulus\ndim = 3\nsigma = 0.1\nkappa = inf\n")
        cfg = parse_config(path)
        assert math.isinf(cfg.model.kappa)

    def test_bad_number_named(self, tmp_path):
        path = tmp_path / "bad.ini"
        path.write_text("[model]\nkind = annulus\nsigma = fish\n")
        with pytest.raises(ConfigError, match="sigma"):
            parse_config(path)

    def test_exit_code_two_for_config_error(self, tmp_path, capsys):
        path = tmp_path / "bad.ini"
        path.write_text("[model]\nkind = annulus\nwhatnot = 3\n")
        code = main(["survival", "--config", str(path), "--out", str(tmp_path / "o")])
        assert code == 2
        assert "whatnot" in capsys.readouterr().err

    def test_exit_code_four_for_unsupported_regime(self, config_path, tmp_path, capsys):
        code = main(["regimes", "--config", str(config_path), "--out", str(tmp_path / "o")])
        assert code == 4  # dim-1 perfect target has no threshold formulas

    def test_missing_model_section(self, tmp_path):
        path = tmp_path / "empty.ini"
        path.write_text("[sweep]\nn_values = 1,2\n")
        code = main(["survival", "--config", str(path), "--out", str(tmp_path / "o")])
        assert code == 2


class TestSurvivalCommand:
    def test_writes_curve_with_resolved_tail(self, config_path, tmp_path):
        out = tmp_path / "out"
        assert main(["survival", "--config", str(config_path), "--out", str(out)]) == 0
        rows = read_rows(out / "survival.csv")
        assert rows[0] == ["t", "S"]
        assert float(rows[-1][1]) < 1e-6

    def test_round_trip_precision(self, config_path, tmp_path):
        out = tmp_path / "out"
        main(["survival", "--config", str(config_path), "--out", str(out)])
        rows = read_rows(out / "survival.csv")[1:]
        values = np.array([[float(a), float(b)] for a, b in rows])
        rewritten = [f"{v:.17g}" for v in values[:, 1]]
        assert rewritten == [r[1] for r in rows]

    def test_idempotent_rerun(self, config_path, tmp_path):
        out = tmp_path / "out"
        main(["survival", "--config", str(config_path), "--out", str(out)])
        first = (out / "survival.csv").read_bytes()
        main(["survival", "--config", str(config_path), "--out", str(out)])
        assert (out / "survival.csv").read_bytes() == first


class TestFastestCommand:
    def test_schema_and_n_one_row(self, config_path, tmp_path):
        out = tmp_path / "out"
        assert main(["fastest", "--config", str(config_path), "--out", str(out)]) == 0
        rows = read_rows(out / "fastest.csv")
        assert rows[0] == ["N", "mean_pde", "mean_small_n", "mean_large_n", "mean_max_approx", "label"]
        n1 = rows[1]
        assert n1[0] == "1"
        assert float(n1[1]) == pytest.approx(0.5, abs=2e-3)  # single-searcher MFPT

    def test_case4_label_exponential_extreme(self, tmp_path):
        path = tmp_path / "case4.ini"
        path.write_text(
            "[model]\nkind = annulus\ndim = 1\nsigma = 0\nkappa = 0.01\ninitial = uniform\n"
            "[numerics]\ncells = 256\ndt_initial = 1e-6\nt_final = 1500\n"
            "[sweep]\nn_values = 10000,100000\n"
        )
        out = tmp_path / "out"
        assert main(["fastest", "--config", str(path), "--out", str(out)]) == 0
        rows = read_rows(out / "fastest.csv")
        assert all(row[5] == "exponential-extreme" for row in rows[1:])

    def test_jobs_flag_preserves_order_and_values(self, config_path, tmp_path):
        out1, out2 = tmp_path / "o1", tmp_path / "o2"
        main(["fastest", "--config", str(config_path), "--out", str(out1), "--jobs", "1"])
        main(["fastest", "--config", str(config_path), "--out", str(out2), "--jobs", "3"])
        assert (out1 / "fastest.csv").read_text() == (out2 / "fastest.csv").read_text()


class TestRegimesCommand:
    def test_threshold_csv(self, tmp_path):
        path = tmp_path / "run.ini"
        path.write_text(
            "[model]\nkind = annulus\ndim = 3\nsigma = 0.1\nkappa = inf\ninitial = delta\n"
            "[sweep]\nn_values = 2,100\nsigma_values = 0.05,0.1\ntheta = 0.5\n"
        )
        out = tmp_path / "out"
        assert main(["regimes", "--config", str(path), "--out", str(out)]) == 0
        rows = read_rows(out / "regime_thresholds.csv")
        assert rows[0] == ["sigma", "n_exp", "n_gum", "n_wei"]
        sigma_row = rows[2]
        assert float(sigma_row[2]) == pytest.approx(100.0, rel=1e-12)  # N_gum at sigma=0.1
        per_n = read_rows(out / "regime_per_n.csv")
        assert per_n[0] == ["N", "theta_exp", "stat_necessary", "label"]
        assert per_n[1][3] == "exponential"
        assert per_n[2][3] == "gumbel"


class TestMcValidateCommand:
    def test_schema_and_law_record(self, tmp_path):
        path = tmp_path / "run.ini"
        path.write_text(
            "[model]\nkind = annulus\ndim = 3\nsigma = 0.1\nkappa = inf\ninitial = delta\n"
            "[numerics]\ncells = 256\ndt_initial = 1e-6\nt_final = 40\n"
            "mc_dt = 1e-3\nmc_trials = 400\nmc_max_time = 30\nmc_n = 20\nmc_kmax = 2\n"
            "[sweep]\ncheckpoints = 8\n"
        )
        out = tmp_path / "out"
        assert main(["mc-validate", "--config", str(path), "--out", str(out), "--seed", "5"]) == 0
        import csv as csv_mod
        import json

        with open(out / "mc_validate.csv", newline="") as fh:
            rows = list(csv_mod.DictReader(fh))
        assert len(rows) == 2
        record = json.loads(rows[0]["law_record"])
        assert "type" in record
        mc_mean, pde_mean = float(rows[0]["mean_emp"]), float(rows[0]["mean_pde"])
        band = 3 * float(rows[0]["stderr"]) + 0.05 * pde_mean
        assert abs(mc_mean - pde_mean) < band
        surv = read_rows(out / "mc_survival_check.csv")
        assert surv[0] == ["t", "S_mc", "band3se", "S_pde"]
        assert len(surv) == 9


class TestEnvJobsFallback:
    def test_env_var_is_read(self, config_path, tmp_path, monkeypatch):
        monkeypatch.setenv("EXTREME_FPT_JOBS", "2")
        out = tmp_path / "out"
        assert main(["fastest", "--config", str(config_path), "--out", str(out)]) == 0

    def test_env_var_invalid(self, config_path, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("EXTREME_FPT_JOBS", "many")
        assert main(["fastest", "--config", str(config_path), "--out", str(tmp_path / "o")]) == 2


class TestFigureBundles:
    def test_regime_bundle_contents(self, tmp_path):
        assert main(["figure", "--figure", "regime", "--out", str(tmp_path)]) == 0
        bundle = tmp_path / "figure_regime"
        manifest = (bundle / "manifest.txt").read_text()
        for name in ("nexp_kinf", "ngum_kinf", "nwei_kinf", "nexp_k1", "ngum_k1", "nwei_k1"):
            assert f"series.{name}.file" in manifest
            assert (bundle / f"{name}.csv").exists()
        assert "axis.x.scale = log" in manifest

    def test_unknown_figure_id(self, tmp_path, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["figure", "--figure", "nope", "--out", str(tmp_path)])
        assert excinfo.value.code == 2

    def test_zoo_right_marker_rows(self, tmp_path):
        assert main(["figure", "--figure", "zoo_right", "--out", str(tmp_path)]) == 0
        bundle = tmp_path / "figure_zoo_right"
        manifest = (bundle / "manifest.txt").read_text()
        assert "marker.sigma0p1.n_exp" in manifest
        assert "marker.sigma0p1.n_gum" in manifest
        markers = read_rows(bundle / "markers_sigma0p1.csv")
        kinds = {row[2] for row in markers[1:]}
        assert kinds == {"square", "circle"}


class TestInstalledEntryPoint:
    def test_console_script_help(self):
        proc = subprocess.run(
            [sys.executable, "-m", "extreme_fpt.cli", "survival", "--help"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "--config" in proc.stdout
