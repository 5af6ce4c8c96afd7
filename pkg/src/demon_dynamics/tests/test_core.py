"""Tests for settings, the error hierarchy and logging setup."""

import pydantic
import pytest
import structlog

from demon_dynamics.core.config import Settings
from demon_dynamics.core.exceptions import (
    BoxPoleError,
    ConfigurationError,
    DegenerateBandError,
    DemonDynamicsError,
    DomainError,
    NormDriftError,
    NumericalContractError,
    PoleVerificationError,
    SideEnergyError,
    ValidationError,
)
from demon_dynamics.core.logging import log_stage_timing, run_context, setup_logging

pytestmark = pytest.mark.unit


class TestSettings:
    def test_log_level_is_normalized(self):
        assert Settings(log_level="debug").log_level == "DEBUG"
        assert Settings(log_format="JSON").log_format == "json"

    @pytest.mark.parametrize("field, value", [("log_level", "loud"), ("log_format", "xml")])
    def test_rejects_unknown_choices(self, field, value):
        with pytest.raises(pydantic.ValidationError):
            Settings(**{field: value})

    def test_reads_prefixed_environment(self, monkeypatch):
        monkeypatch.setenv("DEMON_MAX_WORKERS", "2")
        monkeypatch.setenv("DEMON_SERIES_TERMS", "512")
        settings = Settings()
        assert settings.max_workers == 2
        assert settings.series_terms == 512

    def test_workers_must_be_positive(self):
        with pytest.raises(pydantic.ValidationError):
            Settings(max_workers=0)


class TestExceptions:
    def test_input_side_hierarchy(self):
        assert issubclass(DomainError, ValidationError)
        assert issubclass(DegenerateBandError, ValidationError)
        assert not issubclass(ValidationError, NumericalContractError)
        assert issubclass(NormDriftError, NumericalContractError)
        assert PoleVerificationError("bad", energies=[2.5]).details == {"energies": [2.5]}

    def test_error_codes_and_details(self):
        error = BoxPoleError("on a level", energy=2.0, mode=2)
        assert isinstance(error, NumericalContractError)
        assert isinstance(error, DemonDynamicsError)
        assert error.error_code == "BOX_POLE_ERROR"
        assert error.details == {"energy": 2.0, "mode": 2}
        assert str(error) == "on a level"

    def test_subclass_codes_override_parent(self):
        assert DomainError("y = 0", field="y", value=0.0).error_code == "DOMAIN_ERROR"
        band = DegenerateBandError("a on a multiple of pi", band_a=6.283)
        assert band.error_code == "DEGENERATE_BAND_ERROR"
        assert band.field == "band_a"

    def test_configuration_error_carries_line(self):
        error = ConfigurationError("bad key", config_key="temperature", line=3)
        assert error.details == {"config_key": "temperature", "line": 3}

    def test_side_energy_error(self):
        error = SideEnergyError("empty", side="left", probability=0.0)
        assert (error.side, error.probability) == ("left", 0.0)


class TestLogging:
    def test_run_context_reaches_log_file(self, tmp_path):
        log_file = tmp_path / "logs" / "run.log"
        setup_logging(log_level="INFO", log_format="json", log_file=str(log_file))
        logger = structlog.get_logger("demon_dynamics.tests")
        with run_context(command="evolve", config_sha256="abc123"):
            log_stage_timing(logger, "propagate", 12.34567, steps=21)
        logger.info("Outside run")
        setup_logging(log_level="WARNING", log_format="console")

        lines = log_file.read_text(encoding="utf-8").splitlines()
        staged = [line for line in lines if "Run stage completed" in line]
        assert len(staged) == 1
        assert "abc123" in staged[0]
        assert "12.346" in staged[0]
        outside = [line for line in lines if "Outside run" in line]
        assert outside and "abc123" not in outside[0]
