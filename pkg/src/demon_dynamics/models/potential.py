"""Activation-potential models."""

import math

from pydantic import BaseModel, ConfigDict, Field, model_validator


class ActivationSpec(BaseModel):
    """Momentum-selective point interaction.

    The demon acts on slow right-movers (0 < p < p_ref) and on fast left-movers
    (-p_uv < p < -p_ref). Momenta are wavenumbers.
    """

    model_config = ConfigDict(frozen=True)

    p_ref: float = Field(gt=0, description="Reference momentum P_R")
    p_uv: float = Field(default=math.inf, description="Ultraviolet cleaving P_UV")
    strength: float = Field(default=0.0, description="Interaction strength V0")

    @model_validator(mode="after")
    def validate_bands(self) -> "ActivationSpec":
        if math.isnan(self.p_uv) or self.p_uv <= self.p_ref:
            raise ValueError("p_uv must exceed p_ref")
        if not math.isfinite(self.strength):
            raise ValueError("strength must be finite")
        return self

    @property
    def has_uv_cutoff(self) -> bool:
        return math.isfinite(self.p_uv)
