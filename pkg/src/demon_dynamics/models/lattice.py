"""Lattice Hamiltonian and spectrum models."""

import math
import struct
from enum import Enum
from pathlib import Path
from typing import Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class WallConvention(str, Enum):
    """Where the hard walls of the free box sit relative to sites -N..N.

    EDGE_SITES places them on sites +-N (sine denominator 2N), LATTICE one site
    outside (denominator 2N+2, the eigenbasis of the Dirichlet chain).
    """

    EDGE_SITES = "edge_sites"
    LATTICE = "lattice"

    def span(self, half_sites: int) -> int:
        return 2 * half_sites if self is WallConvention.EDGE_SITES else 2 * half_sites + 2

    def max_mode(self, half_sites: int) -> int:
        return 2 * half_sites - 1 if self is WallConvention.EDGE_SITES else 2 * half_sites + 1


class LatticeConfig(BaseModel):
    """Discretized container with the demon on site 0 (rescaled units)."""

    model_config = ConfigDict(frozen=True)

    half_sites: int = Field(default=124, ge=4, description="N; dimension 2N+1")
    upsilon0: float = Field(default=0.1, description="Rescaled strength m a^2 V0 / hbar^2")
    kappa_r: float = Field(default=math.pi / 4, gt=0, lt=math.pi)
    kappa_d: float = Field(default=math.pi / 2, gt=0, le=math.pi)

    @model_validator(mode="after")
    def validate_band(self) -> "LatticeConfig":
        if not self.kappa_r < self.kappa_d:
            raise ValueError("kappa_r must be below kappa_d")
        if not math.isfinite(self.upsilon0):
            raise ValueError("upsilon0 must be finite")
        return self

    @property
    def dim(self) -> int:
        return 2 * self.half_sites + 1

    @property
    def sites(self) -> np.ndarray:
        return np.arange(-self.half_sites, self.half_sites + 1)


class HamiltonianMatrix(BaseModel):
    """Dense Hamiltonian indexed by site n in [-N, N] (row index n + N)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    config: LatticeConfig
    entries: np.ndarray

    @model_validator(mode="after")
    def validate_shape(self) -> "HamiltonianMatrix":
        dim = self.config.dim
        if self.entries.shape != (dim, dim):
            raise ValueError(f"entries must be {dim}x{dim}, got {self.entries.shape}")
        self.entries.setflags(write=False)
        return self

    @property
    def dim(self) -> int:
        return self.config.dim

    def index(self, site: int) -> int:
        return site + self.config.half_sites

    @property
    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.entries.imag == 0))

    def kinetic_part(self) -> np.ndarray:
        dim = self.dim
        return 2.0 * np.eye(dim) - np.eye(dim, k=1) - np.eye(dim, k=-1)

    def potential_part(self) -> np.ndarray:
        """Demon contribution, confined to row and column 0."""
        return self.entries - self.kinetic_part()


_HEADER = struct.Struct("<q")


class EigenSystem(BaseModel):
    """Ascending eigenvalues Xi_m and orthonormal eigenvectors (columns)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    values: np.ndarray
    vectors: np.ndarray

    @model_validator(mode="after")
    def validate_shape(self) -> "EigenSystem":
        dim = self.values.shape[0]
        if self.vectors.shape != (dim, dim):
            raise ValueError("vectors must be square and match values")
        if dim > 1 and np.any(np.diff(self.values) < 0):
            raise ValueError("values must be ascending")
        self.values.setflags(write=False)
        self.vectors.setflags(write=False)
        return self

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])

    def dump(self, path: Union[str, Path]) -> Path:
        """Write ``dim | values | vectors`` as little-endian 64-bit words, row-major.

        Complex vector entries are stored as consecutive (real, imag) pairs.
        """
        path = Path(path)
        with path.open("wb") as handle:
            handle.write(_HEADER.pack(self.dim))
            handle.write(np.ascontiguousarray(self.values, dtype="<f8").tobytes())
            handle.write(np.ascontiguousarray(self.vectors, dtype="<c16").tobytes())
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> "EigenSystem":
        raw = Path(path).read_bytes()
        (dim,) = _HEADER.unpack_from(raw, 0)
        offset = _HEADER.size
        values = np.frombuffer(raw, dtype="<f8", count=dim, offset=offset).astype(float)
        offset += 8 * dim
        vectors = np.frombuffer(raw, dtype="<c16", count=dim * dim, offset=offset)
        return cls(values=values, vectors=vectors.reshape(dim, dim).astype(complex))
