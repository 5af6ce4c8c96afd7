"""Integration tests for the run orchestrator."""

import json

import numpy as np
import pandas as pd
import pytest

from demon_dynamics.core.exceptions import PoleVerificationError, ValidationError
from demon_dynamics.models import Artifact, EigenSystem, RunConfig
from demon_dynamics.services import orchestration_service
from demon_dynamics.services.config_loader import load_run_config
from demon_dynamics.services.evolution import initial_state
from demon_dynamics.services.orchestration_service import RunOrchestrator
from demon_dynamics.services.serialization import config_digest

pytestmark = pytest.mark.integration


@pytest.fixture
def config(tmp_path):
    return RunConfig(
        half_sites=16,
        tau_max=200.0,
        tau_steps=21,
        output_dir=str(tmp_path / "run"),
        artifacts=["observables", "density", "eigensystem"],
    )


class TestEvolve:
    def test_writes_artifacts_and_manifest(self, config):
        manifest = RunOrchestrator(config, workers=2).run_evolve()
        out = RunOrchestrator(config).output_dir
        assert manifest.outputs == ["observables.csv", "density.csv", "eigensystem.bin"]
        assert manifest.summary["norm_defect"] < 1e-12
        assert manifest.config_sha256 == config_digest(config)

        saved = json.loads((out / "manifest.json").read_text())
        assert saved["command"] == "evolve"
        assert saved["code_version"] == manifest.code_version

        observables = pd.read_csv(out / "observables.csv")
        assert len(observables) == 21
        np.testing.assert_allclose(observables["p_left"] + observables["p_right"], 1.0, atol=1e-12)

        density = pd.read_csv(out / "density.csv")
        assert density.shape == (21, 34)
        assert EigenSystem.load(out / "eigensystem.bin").dim == 33

    def test_respects_artifact_selection(self, config):
        trimmed = config.model_copy(update={"artifacts": [Artifact.OBSERVABLES]})
        manifest = RunOrchestrator(trimmed).run_evolve()
        assert manifest.outputs == ["observables.csv"]

    def test_free_evolution_control(self, config):
        free = config.model_copy(update={"upsilon0": 0.0})
        RunOrchestrator(free).run_evolve()
        frame = pd.read_csv(RunOrchestrator(free).output_dir / "observables.csv")
        np.testing.assert_allclose(frame["entropy"], frame["entropy"].iloc[0], atol=1e-10)
        np.testing.assert_allclose(frame["v_avg"], 0.0, atol=1e-15)

    def test_rerun_from_manifest_reproduces_outputs(self, config, tmp_path):
        first = RunOrchestrator(config).run_evolve()
        assert first.summary["segregation_peak_display_time"] is None
        original = RunOrchestrator(config).output_dir
        replay = load_run_config(
            original / "manifest.json", {"output_dir": str(tmp_path / "again")}
        )
        assert replay.model_copy(update={"output_dir": config.output_dir}) == config
        RunOrchestrator(replay).run_evolve()
        for name in ("observables.csv", "density.csv"):
            again = (tmp_path / "again" / name).read_bytes()
            assert again == (original / name).read_bytes()

    def test_time_grid(self, config):
        taus = RunOrchestrator(config).taus()
        assert taus[0] == 0.0
        assert taus[-1] == 200.0
        assert taus.size == 21


class TestSweep:
    def test_shares_one_eigensystem(self, mocker, config):
        spy = mocker.spy(orchestration_service, "eigendecompose")
        manifest = RunOrchestrator(config).run_sweep([0.5, 0.01])
        assert spy.call_count == 1
        assert not manifest.partial
        frame = pd.read_csv(RunOrchestrator(config).output_dir / "sweep_entropy.csv")
        assert list(frame.columns) == ["tau", "entropy_beta_0.5", "entropy_beta_0.01"]

    def test_single_beta_matches_evolve(self, config, tmp_path):
        evolve_config = config.model_copy(update={"output_dir": str(tmp_path / "evolve")})
        RunOrchestrator(evolve_config).run_evolve()
        RunOrchestrator(config).run_sweep([0.01])
        evolved = pd.read_csv(tmp_path / "evolve" / "observables.csv", float_precision="round_trip")
        swept = pd.read_csv(tmp_path / "run" / "sweep_entropy.csv", float_precision="round_trip")
        np.testing.assert_allclose(swept["entropy_beta_0.01"], evolved["entropy"], rtol=1e-12)

    def test_failed_job_is_recorded(self, mocker, config):
        def flaky(spec, half_sites):
            if spec.beta == 0.5:
                raise ValidationError("state rejected", field="beta", value=0.5)
            return initial_state(spec, half_sites)

        mocker.patch.object(orchestration_service, "initial_state", side_effect=flaky)
        manifest = RunOrchestrator(config).run_sweep([0.5, 0.01])
        assert manifest.partial
        assert manifest.failures == {"0.5": "state rejected"}
        frame = pd.read_csv(RunOrchestrator(config).output_dir / "sweep_entropy.csv")
        assert list(frame.columns) == ["tau", "entropy_beta_0.01"]

    def test_uniform_label(self, config):
        manifest = RunOrchestrator(config).run_sweep(["uniform"])
        assert list(manifest.summary) == ["uniform"]


class TestPoles:
    def test_scan_is_written_and_verified(self, config):
        manifest = RunOrchestrator(config, workers=2).run_poles()
        assert manifest.outputs == ["poles.txt"]
        assert manifest.summary["roots"] >= 1
        assert manifest.summary["max_residual"] < 1e-10
        assert manifest.summary["flagged_extra_pole"] == pytest.approx(8.0)

    def test_unverified_roots_raise(self, mocker, config, tmp_path):
        mocker.patch.object(orchestration_service, "evaluate_denominator", return_value=1e-6)
        with pytest.raises(PoleVerificationError) as exc_info:
            RunOrchestrator(config, workers=2).run_poles()
        assert exc_info.value.energies
        assert not (tmp_path / "run" / "poles.txt").exists()
        assert not (tmp_path / "run" / "manifest.json").exists()


class TestGreens:
    @pytest.mark.parametrize("kind", ["demon", "delta"])
    def test_writes_grid(self, config, kind):
        manifest = RunOrchestrator(config).run_greens(kind, 0.7, 0.5, points=5)
        frame = pd.read_csv(RunOrchestrator(config).output_dir / "greens.csv")
        assert manifest.summary["kind"] == kind
        assert list(frame.columns) == ["x", "x_prime", "re_g", "im_g", "re_antisym", "im_antisym"]
        assert len(frame) == 5
        assert frame["x"].iloc[0] == pytest.approx(-np.pi / 2)

    def test_point_interaction_is_symmetric(self, config):
        RunOrchestrator(config).run_greens("delta", 0.7, 0.5, points=5)
        frame = pd.read_csv(RunOrchestrator(config).output_dir / "greens.csv")
        np.testing.assert_allclose(frame["re_antisym"], 0.0, atol=1e-12)

    def test_demon_has_antisymmetric_part(self, config):
        RunOrchestrator(config).run_greens("demon", 0.7, 0.5, points=5)
        frame = pd.read_csv(RunOrchestrator(config).output_dir / "greens.csv")
        assert np.max(np.abs(frame["re_antisym"] + 1j * frame["im_antisym"])) > 1e-6

    @pytest.mark.parametrize("kind, points", [("coulomb", 5), ("demon", 1)])
    def test_rejects_bad_request(self, config, kind, points):
        with pytest.raises(ValidationError):
            RunOrchestrator(config).run_greens(kind, 0.7, 0.5, points=points)
