"""Run configuration and manifest models."""

import math
from enum import Enum
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..core.config import settings
from .evolution import InitialStateSpec
from .greens import ContainerSpec
from .lattice import LatticeConfig
from .potential import ActivationSpec

UNIFORM = "uniform"


class Artifact(str, Enum):
    """Files a run may write besides its manifest."""

    OBSERVABLES = "observables"
    DENSITY = "density"
    EIGENSYSTEM = "eigensystem"


class RunConfig(BaseModel):
    """Every parameter of a batch run; defaults reproduce the reference configuration."""

    model_config = ConfigDict(frozen=True, extra="forbid", ser_json_inf_nan="constants")

    # Lattice
    half_sites: int = Field(default=124, ge=4)
    upsilon0: float = 0.1
    kappa_r: float = math.pi / 4
    kappa_d: float = math.pi / 2

    # Initial state
    beta: Union[float, str] = 0.01

    # Time grid
    tau_max: float = Field(default=20000.0, ge=0)
    tau_steps: int = Field(default=2001, ge=1)

    # Outputs
    output_dir: str = Field(default_factory=lambda: settings.output_dir)
    artifacts: List[Artifact] = Field(
        default_factory=lambda: [Artifact.OBSERVABLES, Artifact.DENSITY]
    )

    # Continuum container and pole scan
    box_length: float = Field(default=math.pi, gt=0)
    hbar: float = Field(default=1.0, gt=0)
    series_terms: int = Field(default_factory=lambda: settings.series_terms, ge=32)
    p_ref: float = Field(default=4.6, gt=0)
    p_uv: float = math.inf
    strength: float = 2.0
    pole_e_lo: float = Field(default=0.1, gt=0)
    pole_e_hi: float = Field(default=30.0, gt=0)

    # Sweep
    sweep_betas: List[Union[float, str]] = Field(default_factory=lambda: [0.5, 0.01, 0.005])

    @field_validator("beta")
    @classmethod
    def validate_beta(cls, v: Union[float, str]) -> Union[float, str]:
        return _validate_beta_value(v)

    @field_validator("sweep_betas")
    @classmethod
    def validate_sweep(cls, v: List[Union[float, str]]) -> List[Union[float, str]]:
        if not v:
            raise ValueError("sweep needs at least one beta value")
        return [_validate_beta_value(item) for item in v]

    @model_validator(mode="after")
    def validate_consistency(self) -> "RunConfig":
        self.lattice_config()
        if not self.pole_e_lo < self.pole_e_hi:
            raise ValueError("pole_e_lo must be below pole_e_hi")
        return self

    def lattice_config(self) -> LatticeConfig:
        return LatticeConfig(
            half_sites=self.half_sites,
            upsilon0=self.upsilon0,
            kappa_r=self.kappa_r,
            kappa_d=self.kappa_d,
        )

    def container_spec(self) -> ContainerSpec:
        return ContainerSpec(
            box_length=self.box_length, hbar=self.hbar, series_terms=self.series_terms
        )

    def activation_spec(self) -> ActivationSpec:
        return ActivationSpec(p_ref=self.p_ref, p_uv=self.p_uv, strength=self.strength)

    def initial_state_spec(self, beta: Optional[Union[float, str]] = None) -> InitialStateSpec:
        value = self.beta if beta is None else beta
        if value == UNIFORM:
            return InitialStateSpec.uniform()
        return InitialStateSpec.boltzmann(float(value))

    def wants(self, artifact: Artifact) -> bool:
        return artifact in self.artifacts


def _validate_beta_value(v: Union[float, str]) -> Union[float, str]:
    if isinstance(v, str):
        if v.strip().lower() == UNIFORM:
            return UNIFORM
        v = float(v)
    if not math.isfinite(v) or v < 0:
        raise ValueError("beta must be a finite non-negative number or 'uniform'")
    return float(v)


class RunManifest(BaseModel):
    """Provenance record written next to a run's outputs."""

    model_config = ConfigDict(ser_json_inf_nan="constants")

    command: str
    code_version: str
    config_sha256: str
    config: Dict[str, object]
    outputs: List[str] = Field(default_factory=list)
    partial: bool = False
    failures: Dict[str, str] = Field(default_factory=dict)
    summary: Dict[str, object] = Field(default_factory=dict)
