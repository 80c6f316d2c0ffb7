"""Batch front end: exit codes, files, determinism."""

import json
import math
from pathlib import Path

import numpy as np
import pytest

from hyplab.cli import main
from hyplab.geometry import HalfPlanePoint
from hyplab.regions import EuclideanDisc, Region, Replication, EuclideanRect, save_region
from hyplab.spectral import SpectralCoefficients, default_s_grid, save_coefficients


@pytest.fixture()
def strips_file(tmp_path):
    region = Region((EuclideanRect(0.0, 0.5, 1.0, 2.0),),
                    replication=Replication(2.5, 2.0, -10, 10))
    path = tmp_path / "strips.region.json"
    save_region(path, region)
    return str(path)


@pytest.fixture()
def bump_file(tmp_path):
    s_grid = default_s_grid(12.0, 385)
    values = np.exp(-((s_grid / 4.0) ** 2))
    path = tmp_path / "bump.coeffs.json"
    save_coefficients(path, SpectralCoefficients(s_grid, values, HalfPlanePoint(0.0, 1.0)))
    return str(path)


class TestObsConstantCommand:
    def test_audit_values(self, tmp_path):
        out = str(tmp_path / "obs")
        rc = main(["obs-constant", "--K", "1", "--c-tilde", "1", "--T", "1",
                   "--lam", "0.8", "--out", out])
        assert rc == 0
        summary = json.loads(Path(out + ".json").read_text())
        np.testing.assert_allclose(summary["C_obs"], math.exp(42.0), rtol=1e-12)
        np.testing.assert_allclose(summary["mu"], 16.0 / 7.0, rtol=1e-12)
        np.testing.assert_allclose(summary["C_prime"], 6.3, rtol=1e-12)
        rows = Path(out + ".csv").read_text().splitlines()
        assert rows[0].startswith("m,")
        assert len(rows) > 4

    def test_byte_identical_reruns(self, tmp_path):
        out1 = str(tmp_path / "a")
        out2 = str(tmp_path / "b")
        argv = ["obs-constant", "--K", "1", "--c-tilde", "1", "--T", "1", "--lam", "0.8"]
        assert main(argv + ["--out", out1]) == 0
        assert main(argv + ["--out", out2]) == 0
        assert Path(out1 + ".json").read_bytes() == Path(out2 + ".json").read_bytes()
        assert Path(out1 + ".csv").read_bytes() == Path(out2 + ".csv").read_bytes()


class TestKernelCommands:
    def test_eval_table_and_golden(self, tmp_path):
        out = str(tmp_path / "kernel")
        golden = str(tmp_path / "golden.json")
        rc = main(["kernel-eval", "--t", "1", "--d", "0,1", "--emit-golden", golden,
                   "--out", out])
        assert rc == 0
        payload = json.loads(Path(golden).read_text())
        assert payload["kind"] == "heat-kernel-golden"
        assert len(payload["entries"]) == 2

    def test_mass_check_passes(self, tmp_path):
        out = str(tmp_path / "mass")
        rc = main(["kernel-check", "--t", "1", "--mass", "--out", out])
        assert rc == 0
        summary = json.loads(Path(out + ".json").read_text())
        assert "mass" in summary["checks"]

    def test_impossible_tolerance_exits_4(self, tmp_path):
        out = str(tmp_path / "massfail")
        rc = main(["kernel-check", "--t", "1", "--mass", "--mass-tol", "1e-15",
                   "--out", out])
        assert rc == 4

    def test_requires_a_check(self, tmp_path):
        rc = main(["kernel-check", "--t", "1", "--out", str(tmp_path / "x")])
        assert rc == 2


class TestCoverCommand:
    def test_covering_summary(self, tmp_path):
        out = str(tmp_path / "cover")
        rc = main(["cover", "--samples", "2000", "--seed", "3", "--out", out])
        assert rc == 0
        summary = json.loads(Path(out + ".json").read_text())
        assert summary["covered"] is True
        assert summary["max_multiplicity"] <= summary["bound"]

    def test_seeded_determinism(self, tmp_path):
        argv = ["cover", "--samples", "500", "--seed", "11"]
        out1, out2 = str(tmp_path / "c1"), str(tmp_path / "c2")
        assert main(argv + ["--out", out1]) == 0
        assert main(argv + ["--out", out2]) == 0
        assert Path(out1 + ".csv").read_bytes() == Path(out2 + ".csv").read_bytes()


class TestThicknessCommand:
    def test_certificate_on_strips(self, strips_file, tmp_path):
        out = str(tmp_path / "thick")
        rc = main(["thickness", "--region", strips_file, "--R", "2", "--delta", "1e-3",
                   "--window=-1,1,-0.5,0.5", "--grid-step", "1.0",
                   "--rel-tol", "1e-4", "--abs-tol", "1e-7", "--out", out])
        assert rc == 0
        summary = json.loads(Path(out + ".json").read_text())
        assert summary["mode"] == "certified-on-grid"
        assert summary["min_mass"] >= 1e-3

    def test_missing_region_file_exits_2(self, tmp_path):
        rc = main(["thickness", "--region", str(tmp_path / "nope.json"), "--R", "1",
                   "--delta", "0.1", "--window", "0,1,0,1", "--out", str(tmp_path / "t")])
        assert rc == 2


class TestSpectralCommands:
    def test_project_writes_contractive_norms(self, bump_file, tmp_path):
        out = str(tmp_path / "proj")
        rc = main(["project", "--coeffs", bump_file, "--band-limit", "2.0", "--out", out])
        assert rc == 0
        summary = json.loads(Path(out + ".json").read_text())
        assert summary["contractive"] is True
        assert Path(summary["projected_file"]).exists()

    def test_harmonic_lift_value(self, bump_file, tmp_path):
        out = str(tmp_path / "lift")
        rc = main(["harmonic-lift", "--coeffs", bump_file, "--band-limit", "1.5",
                   "--t", "0.0", "--x", "0.2", "--y", "1.1", "--out", out])
        assert rc == 0
        summary = json.loads(Path(out + ".json").read_text())
        assert summary["value"] == 0.0

    def test_estimate_ratio_table(self, bump_file, tmp_path):
        hole_region = Region((EuclideanDisc(0.0, 1.5, 0.8),), complement=True)
        region_path = tmp_path / "hole.region.json"
        save_region(region_path, hole_region)
        out = str(tmp_path / "ratio")
        rc = main(["estimate-ratio", "--region", str(region_path), "--coeffs", bump_file,
                   "--band-limits", "1,2", "--out", out])
        assert rc == 0
        rows = Path(out + ".csv").read_text().splitlines()
        assert len(rows) == 3
        summary = json.loads(Path(out + ".json").read_text())
        assert "slope" in summary


class TestNecessaryConditionCommand:
    def test_extraction_report(self, tmp_path):
        from hyplab.geometry import GeodesicBall

        region = Region((GeodesicBall(HalfPlanePoint(0.0, 1.0), 1.2),),
                        replication=Replication(1e5, 16.0, -12, 12), complement=True)
        region_path = tmp_path / "ladder.region.json"
        save_region(region_path, region)
        out = str(tmp_path / "extract")
        rc = main(["necessary-condition", "--region", str(region_path),
                   "--c-obs", repr(math.exp(42.0)), "--rel-tol", "1e-7",
                   "--abs-tol", "1e-10", "--out", out])
        assert rc == 0
        summary = json.loads(Path(out + ".json").read_text())
        assert summary["L"] > 0
        assert summary["delta"] > 0
        assert len(summary["z0_checks"]) == 3


class TestArgumentHandling:
    def test_unknown_command_exits_2(self):
        assert main(["frobnicate"]) == 2

    def test_missing_required_flag_exits_2(self, tmp_path):
        assert main(["kernel-eval", "--t", "1", "--out", str(tmp_path / "x")]) == 2
