"""Observable models."""

from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

OBSERVABLE_COLUMNS = (
    "tau",
    "entropy",
    "p_left",
    "p_right",
    "e_left",
    "e_right",
    "v_avg",
    "v_timeavg",
)

# one display unit on the figure axes is 10^3 rescaled tau
DISPLAY_TIME_UNIT = 1.0e3


class LateralObservables(BaseModel):
    """Side probabilities and normalized side energies of one state."""

    model_config = ConfigDict(frozen=True)

    p_left: float
    p_right: float
    e_left: float
    e_right: float


class ObservableSeries(BaseModel):
    """Per-tau observables of a run, column-oriented."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    tau: np.ndarray
    entropy: np.ndarray
    p_left: np.ndarray
    p_right: np.ndarray
    e_left: np.ndarray
    e_right: np.ndarray
    v_avg: np.ndarray
    v_timeavg: np.ndarray

    @model_validator(mode="after")
    def validate_lengths(self) -> "ObservableSeries":
        lengths = {getattr(self, name).shape for name in OBSERVABLE_COLUMNS}
        if len(lengths) != 1:
            raise ValueError("all observable columns must share the tau grid")
        return self

    @property
    def display_time(self) -> np.ndarray:
        return self.tau / DISPLAY_TIME_UNIT

    def columns(self) -> dict:
        return {name: getattr(self, name) for name in OBSERVABLE_COLUMNS}


class EntropyDip(BaseModel):
    """A local entropy minimum below the initial value."""

    model_config = ConfigDict(frozen=True)

    tau: float
    entropy: float
    depth: float

    @property
    def display_time(self) -> float:
        return self.tau / DISPLAY_TIME_UNIT


class LateralGapPeak(BaseModel):
    """Largest left-right probability gap inside a time window."""

    model_config = ConfigDict(frozen=True)

    tau: float
    gap: float

    @property
    def display_time(self) -> float:
        return self.tau / DISPLAY_TIME_UNIT


class EntropyBudget(BaseModel):
    """Bound on the demon and total entropy changes."""

    model_config = ConfigDict(frozen=True)

    delta_sd_bound: float
    delta_st_bound: float

    def as_tuple(self) -> Tuple[float, float]:
        return self.delta_sd_bound, self.delta_st_bound


class RevivalTimes(BaseModel):
    """Full and quarter revival times of a quadratic box spectrum."""

    model_config = ConfigDict(frozen=True)

    tau_full: float
    tau_quarter: float


class EntropyLedger(BaseModel):
    """Entropy bookkeeping of a run between its first and last tau."""

    delta_sp: float
    delta_v: float
    budget: EntropyBudget
    dips: List[EntropyDip]
