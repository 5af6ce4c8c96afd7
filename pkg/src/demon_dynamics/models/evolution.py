"""Initial-state and wave-trace models."""

from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .lattice import WallConvention


class InitialStateKind(str, Enum):
    """Initial condition families."""

    BOLTZMANN = "boltzmann"
    UNIFORM = "uniform"
    EXPLICIT = "explicit"


class InitialStateSpec(BaseModel):
    """Recipe for the initial wave function; always normalized on construction."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: InitialStateKind = InitialStateKind.BOLTZMANN
    beta: Optional[float] = Field(default=0.01, ge=0)
    vector: Optional[np.ndarray] = None
    convention: WallConvention = WallConvention.EDGE_SITES

    @model_validator(mode="after")
    def validate_kind(self) -> "InitialStateSpec":
        if self.kind is InitialStateKind.BOLTZMANN and self.beta is None:
            raise ValueError("boltzmann initial state requires beta")
        if self.kind is InitialStateKind.EXPLICIT and self.vector is None:
            raise ValueError("explicit initial state requires a vector")
        return self

    @classmethod
    def boltzmann(
        cls, beta: float, convention: WallConvention = WallConvention.EDGE_SITES
    ) -> "InitialStateSpec":
        return cls(kind=InitialStateKind.BOLTZMANN, beta=beta, convention=convention)

    @classmethod
    def uniform(cls) -> "InitialStateSpec":
        return cls(kind=InitialStateKind.UNIFORM, beta=None)

    @classmethod
    def explicit(cls, vector: np.ndarray) -> "InitialStateSpec":
        vector = np.asarray(vector, dtype=complex)
        return cls(kind=InitialStateKind.EXPLICIT, beta=None, vector=vector)

    @property
    def label(self) -> str:
        if self.kind is InitialStateKind.BOLTZMANN:
            return f"{self.beta:g}"
        return self.kind.value


class WaveTrace(BaseModel):
    """State vectors on an ascending time grid (rows = tau, columns = sites)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    taus: np.ndarray
    states: np.ndarray

    @model_validator(mode="after")
    def validate_shape(self) -> "WaveTrace":
        if self.taus.ndim != 1 or self.states.ndim != 2:
            raise ValueError("taus must be 1-D and states 2-D")
        if self.states.shape[0] != self.taus.shape[0]:
            raise ValueError("one state per tau is required")
        if self.taus.size > 1 and np.any(np.diff(self.taus) < 0):
            raise ValueError("taus must be ascending")
        return self

    @property
    def half_sites(self) -> int:
        return (self.states.shape[1] - 1) // 2

    def density(self) -> np.ndarray:
        return np.abs(self.states) ** 2

    def norm_defect(self) -> float:
        return float(np.max(np.abs(np.linalg.norm(self.states, axis=1) - 1.0)))
