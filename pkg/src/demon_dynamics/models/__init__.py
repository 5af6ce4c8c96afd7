"""Pydantic models for Demon Dynamics."""

from .diagnostics import (
    EntropyBudget,
    EntropyDip,
    EntropyLedger,
    LateralGapPeak,
    LateralObservables,
    ObservableSeries,
    RevivalTimes,
)
from .evolution import InitialStateKind, InitialStateSpec, WaveTrace
from .greens import (
    AdjointSymmetryReport,
    BoxGreenTerms,
    ContainerSpec,
    GreenSplit,
    IntegralMode,
    PoleReport,
    PoleRoot,
    QuadratureGrid,
)
from .lattice import EigenSystem, HamiltonianMatrix, LatticeConfig, WallConvention
from .potential import ActivationSpec
from .run import Artifact, RunConfig, RunManifest

__all__ = [
    "ActivationSpec",
    "AdjointSymmetryReport",
    "Artifact",
    "BoxGreenTerms",
    "ContainerSpec",
    "EigenSystem",
    "EntropyBudget",
    "EntropyDip",
    "EntropyLedger",
    "GreenSplit",
    "HamiltonianMatrix",
    "InitialStateKind",
    "InitialStateSpec",
    "IntegralMode",
    "LateralGapPeak",
    "LateralObservables",
    "LatticeConfig",
    "ObservableSeries",
    "PoleReport",
    "PoleRoot",
    "QuadratureGrid",
    "RevivalTimes",
    "RunConfig",
    "RunManifest",
    "WallConvention",
    "WaveTrace",
]
