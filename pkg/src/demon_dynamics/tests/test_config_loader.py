"""Tests for run-file parsing and run configuration validation."""

import json
import math

import pytest

from demon_dynamics.core.exceptions import ConfigurationError
from demon_dynamics.models import Artifact, RunConfig, RunManifest
from demon_dynamics.services.config_loader import (
    build_run_config,
    load_manifest_config,
    load_run_config,
    parse_number,
    parse_run_lines,
)
from demon_dynamics.services.serialization import config_digest, config_payload, write_manifest

pytestmark = pytest.mark.unit


class TestParseNumber:
    @pytest.mark.parametrize(
        "text, expected",
        [
            ("3", 3),
            ("-12", -12),
            ("0.25", 0.25),
            ("1e-3", 1e-3),
            ("pi", math.pi),
            ("2*pi", 2 * math.pi),
            ("pi/4", math.pi / 4),
            ("3 * pi / 4", 3 * math.pi / 4),
            ("inf", math.inf),
        ],
    )
    def test_forms(self, text, expected):
        assert parse_number(text) == pytest.approx(expected)

    def test_integers_stay_integers(self):
        assert isinstance(parse_number("124"), int)

    @pytest.mark.parametrize("text", ["abc", "pi*2", "", "4 pi"])
    def test_rejects_garbage(self, text):
        with pytest.raises(ValueError):
            parse_number(text)


class TestParseRunLines:
    def test_values_and_origin(self):
        values, origin = parse_run_lines(
            [
                "# reference run",
                "half_sites = 64",
                "",
                "kappa_r = pi/4   # band edge",
                "beta = uniform",
                "output_dir = out/run 1",
                "sweep_betas = 0.5, uniform, 0.01",
                "artifacts = observables, eigensystem",
            ]
        )
        assert values["half_sites"] == 64
        assert values["kappa_r"] == pytest.approx(math.pi / 4)
        assert values["beta"] == "uniform"
        assert values["output_dir"] == "out/run 1"
        assert values["sweep_betas"] == [0.5, "uniform", 0.01]
        assert values["artifacts"] == ["observables", "eigensystem"]
        assert origin == {
            "half_sites": 2,
            "kappa_r": 4,
            "beta": 5,
            "output_dir": 6,
            "sweep_betas": 7,
            "artifacts": 8,
        }

    def test_unknown_key(self):
        with pytest.raises(ConfigurationError) as exc_info:
            parse_run_lines(["half_sites = 8", "temperature = 3"])
        assert exc_info.value.line == 2
        assert exc_info.value.config_key == "temperature"

    def test_duplicate_key(self):
        with pytest.raises(ConfigurationError) as exc_info:
            parse_run_lines(["beta = 0.1", "# again", "beta = 0.2"])
        assert exc_info.value.line == 3
        assert "line 1" in exc_info.value.message

    def test_missing_equals(self):
        with pytest.raises(ConfigurationError) as exc_info:
            parse_run_lines(["half_sites 8"])
        assert exc_info.value.line == 1

    def test_bad_number(self):
        with pytest.raises(ConfigurationError) as exc_info:
            parse_run_lines(["upsilon0 = strong"])
        assert exc_info.value.config_key == "upsilon0"
        assert exc_info.value.error_code == "CONFIGURATION_ERROR"


class TestBuildRunConfig:
    def test_defaults(self):
        config = build_run_config({})
        assert config.half_sites == 124
        assert config.beta == 0.01
        assert config.p_uv == math.inf
        assert config.artifacts == [Artifact.OBSERVABLES, Artifact.DENSITY]

    def test_overrides_win_and_none_is_ignored(self):
        config = build_run_config(
            {"half_sites": 64, "beta": 0.5}, overrides={"half_sites": 32, "beta": None}
        )
        assert config.half_sites == 32
        assert config.beta == 0.5

    def test_string_beta_from_command_line(self):
        assert build_run_config({}, overrides={"beta": "0.05"}).beta == 0.05
        assert build_run_config({}, overrides={"beta": "Uniform"}).beta == "uniform"

    def test_field_error_reports_line(self):
        values, origin = parse_run_lines(["upsilon0 = 0.2", "half_sites = 2"])
        with pytest.raises(ConfigurationError) as exc_info:
            build_run_config(values, origin)
        assert exc_info.value.config_key == "half_sites"
        assert exc_info.value.line == 2

    def test_negative_beta(self):
        with pytest.raises(ConfigurationError) as exc_info:
            build_run_config({"beta": -1.0})
        assert exc_info.value.config_key == "beta"

    def test_inverted_pole_window(self):
        with pytest.raises(ConfigurationError):
            build_run_config({"pole_e_lo": 5.0, "pole_e_hi": 1.0})

    def test_inverted_lattice_band(self):
        with pytest.raises(ConfigurationError):
            build_run_config({"kappa_r": 2.0, "kappa_d": 1.0})


class TestLoadRunConfig:
    def test_reads_file(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("half_sites = 20\ntau_max = 100\ntau_steps = 11\n", encoding="utf-8")
        config = load_run_config(path, {"tau_steps": 21})
        assert config.half_sites == 20
        assert config.tau_max == 100.0
        assert config.tau_steps == 21

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            load_run_config(tmp_path / "absent.cfg")

    def test_without_file(self):
        assert load_run_config(None, {"upsilon0": 0.0}).upsilon0 == 0.0


@pytest.fixture
def manifest_path(tmp_path):
    config = RunConfig(half_sites=20, beta="uniform", sweep_betas=[0.5, "uniform"], tau_steps=11)
    manifest = RunManifest(
        command="evolve",
        code_version="test",
        config_sha256=config_digest(config),
        config=config_payload(config),
    )
    return write_manifest(manifest, tmp_path / "manifest.json")


class TestLoadManifestConfig:
    def test_rebuilds_recorded_config(self, manifest_path):
        config = load_run_config(manifest_path)
        assert config.half_sites == 20
        assert config.beta == "uniform"
        assert config.sweep_betas == [0.5, "uniform"]
        assert config.p_uv == math.inf
        assert config_digest(config) == json.loads(manifest_path.read_text())["config_sha256"]

    def test_overrides_apply_on_top(self, manifest_path, tmp_path):
        config = load_manifest_config(manifest_path, {"output_dir": str(tmp_path / "again")})
        assert config.output_dir == str(tmp_path / "again")
        assert config.tau_steps == 11

    def test_tampered_config_is_rejected(self, manifest_path):
        payload = json.loads(manifest_path.read_text())
        payload["config"]["half_sites"] = 21
        manifest_path.write_text(json.dumps(payload), encoding="utf-8")
        with pytest.raises(ConfigurationError) as exc_info:
            load_run_config(manifest_path)
        assert exc_info.value.config_key == "config_sha256"

    def test_not_a_manifest(self, tmp_path):
        path = tmp_path / "notes.json"
        path.write_text('{"half_sites": 20}', encoding="utf-8")
        with pytest.raises(ConfigurationError):
            load_run_config(path)
