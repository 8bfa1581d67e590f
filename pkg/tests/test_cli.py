import json
import os
from pathlib import Path

import pytest
from click.testing import CliRunner

from betaedge.cli import main
from betaedge.io import read_csv


@pytest.fixture
def runner():
    return CliRunner()


class TestDensityCommand:
    def test_gaussian_density_files(self, runner, tmp_path):
        result = runner.invoke(main, [
            "density", "--ensemble", "gaussian", "--beta", "2", "--n", "3,5",
            "--grid", "-2:1:0.5", "--out", str(tmp_path), "--jobs", "1",
            "--precision-bits", "128"])
        assert result.exit_code == 0, result.output
        for N in (3, 5):
            path = tmp_path / f"density_gaussian_beta2_N{N}.csv"
            assert path.exists()
            meta, header, rows = read_csv(path)
            assert header == ["x", "density"]
            assert meta["beta"] == 2
            assert meta["N"] == N
            assert "offset" in meta and "scale" in meta
            assert len(rows) == 7
            assert all(float(r[1]) > 0 for r in rows)

    def test_laguerre_requires_a(self, runner, tmp_path):
        result = runner.invoke(main, [
            "density", "--ensemble", "laguerre", "--beta", "2", "--n", "3",
            "--out", str(tmp_path), "--jobs", "1"])
        assert result.exit_code == 2
        assert "error:" in result.output or result.exit_code == 2

    def test_odd_beta_rejected(self, runner, tmp_path):
        result = runner.invoke(main, [
            "density", "--ensemble", "gaussian", "--beta", "3", "--n", "3",
            "--out", str(tmp_path), "--jobs", "1"])
        assert result.exit_code == 2

    def test_json_format(self, runner, tmp_path):
        result = runner.invoke(main, [
            "density", "--ensemble", "gaussian", "--beta", "2", "--n", "2",
            "--grid", "-1:0:0.5", "--format", "json", "--out", str(tmp_path),
            "--jobs", "1", "--precision-bits", "128"])
        assert result.exit_code == 0, result.output
        doc = json.loads((tmp_path / "density_gaussian_beta2_N2.json").read_text())
        assert doc["metadata"]["N"] == 2
        assert len(doc["rows"]) == 3

    def test_parallel_jobs(self, runner, tmp_path):
        result = runner.invoke(main, [
            "density", "--ensemble", "gaussian", "--beta", "2", "--n", "2,3,4",
            "--grid", "-1:0:0.5", "--out", str(tmp_path), "--jobs", "2",
            "--precision-bits", "128"])
        assert result.exit_code == 0, result.output
        assert len(list(tmp_path.glob("density_*.csv"))) == 3


class TestCorrectionCommand:
    def test_curves_and_ratefit(self, runner, tmp_path):
        result = runner.invoke(main, [
            "correction", "--ensemble", "gaussian", "--beta", "2",
            "--n", "6,8,10", "--grid", "-2:0:0.5", "--out", str(tmp_path),
            "--jobs", "1", "--precision-bits", "192", "--probe", "-1"])
        assert result.exit_code == 0, result.output
        meta, header, rows = read_csv(tmp_path / "correction_gaussian_beta2.csv")
        assert header == ["x", "dev_6_8", "dev_8_10"]
        assert meta["N_values"] == [6, 8, 10]
        fit = json.loads((tmp_path / "correction_gaussian_beta2_ratefit.json").read_text())
        assert "-1.0" in fit["pair_rate_exponent_by_probe"]

    def test_single_N_rejected(self, runner, tmp_path):
        result = runner.invoke(main, [
            "correction", "--ensemble", "gaussian", "--beta", "2", "--n", "6",
            "--out", str(tmp_path), "--jobs", "1"])
        assert result.exit_code == 2


class TestDerivcheckCommand:
    def test_beta2_gaussian_exit_code_zerok(self, runner, tmp_path):
        result = runner.invoke(main, [
            "derivcheck", "--ensemble", "gaussian", "--beta", "2", "--n", "10",
            "--out", str(tmp_path)])
        assert result.exit_code == 4

    def test_beta6_gaussian(self, runner, tmp_path):
        result = runner.invoke(main, [
            "derivcheck", "--ensemble", "gaussian", "--beta", "6", "--n", "8",
            "--grid", "-2:0:0.5", "--out", str(tmp_path),
            "--precision-bits", "192"])
        assert result.exit_code == 0, result.output
        meta, header, rows = read_csv(tmp_path / "derivcheck_gaussian_beta6_N8.csv")
        assert header == ["x", "f2", "neg_deriv"]
        assert len(rows) == 5


class TestValidateMcCommand:
    def test_small_run(self, runner, tmp_path):
        result = runner.invoke(main, [
            "validate-mc", "--ensemble", "gaussian", "--beta", "2", "--n", "8",
            "--samples", "400", "--seed", "5", "--bins", "20",
            "--grid", "-6:2:0.5", "--out", str(tmp_path),
            "--precision-bits", "128"])
        assert result.exit_code == 0, result.output
        meta, header, rows = read_csv(tmp_path / "mc_gaussian_beta2_N8.csv")
        assert header == ["bin_center", "count", "density_estimate", "exact_density"]
        stats = json.loads((tmp_path / "mc_gaussian_beta2_N8_stats.json").read_text())
        assert 0.0 <= stats["chi_square"]["p_value"] <= 1.0

    def test_determinism(self, runner, tmp_path):
        args = ["validate-mc", "--ensemble", "gaussian", "--beta", "2", "--n", "6",
                "--samples", "100", "--seed", "9", "--bins", "10",
                "--grid", "-4:2:0.5", "--precision-bits", "128"]
        d1, d2 = tmp_path / "a", tmp_path / "b"
        for d in (d1, d2):
            result = runner.invoke(main, args + ["--out", str(d)])
            assert result.exit_code == 0, result.output
        _, h1, r1 = read_csv(d1 / "mc_gaussian_beta2_N6.csv")
        _, h2, r2 = read_csv(d2 / "mc_gaussian_beta2_N6.csv")
        assert h1 == h2 and r1 == r2


class TestReferenceCommand:
    def test_columns(self, runner, tmp_path):
        result = runner.invoke(main, [
            "reference", "--grid", "-2:1:1", "--out", str(tmp_path),
            "--precision-bits", "128"])
        assert result.exit_code == 0, result.output
        meta, header, rows = read_csv(tmp_path / "reference.csv")
        assert header[:3] == ["x", "airy", "airy_prime"]
        assert len(rows) == 4


class TestConfigAndEnv:
    def test_config_file_with_flag_override(self, runner, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("beta = 2\nnlist = 4\ngrid = -1:0:0.5\n")
        result = runner.invoke(main, [
            "density", "--ensemble", "gaussian", "--beta", "2", "--n", "3",
            "--config", str(cfg), "--out", str(tmp_path), "--jobs", "1",
            "--precision-bits", "128"])
        assert result.exit_code == 0, result.output
        # explicit --n wins over the config nlist
        assert (tmp_path / "density_gaussian_beta2_N3.csv").exists()
        assert not (tmp_path / "density_gaussian_beta2_N4.csv").exists()

    def test_env_precision(self, runner, tmp_path, monkeypatch):
        monkeypatch.setenv("BETAEDGE_PRECISION_BITS", "160")
        result = runner.invoke(main, [
            "density", "--ensemble", "gaussian", "--beta", "2", "--n", "2",
            "--grid", "0:1:1", "--out", str(tmp_path), "--jobs", "1"])
        assert result.exit_code == 0, result.output
        meta, _, _ = read_csv(tmp_path / "density_gaussian_beta2_N2.csv")
        assert meta["precision_bits"] == 160
