"""Green's function models: container, quadrature grids, pole reports."""

import math
from enum import Enum
from typing import Iterable, List, Optional

import numpy as np
from numpy.polynomial.legendre import leggauss
from pydantic import BaseModel, ConfigDict, Field, model_validator


class IntegralMode(str, Enum):
    """How the container integrals are evaluated."""

    EXACT = "exact"
    APPROX = "approx"


class ContainerSpec(BaseModel):
    """Dirichlet box [-L/2, L/2] with unit mass."""

    model_config = ConfigDict(frozen=True)

    box_length: float = Field(default=math.pi, gt=0)
    hbar: float = Field(default=1.0, gt=0)
    series_terms: int = Field(default=4096, ge=32)

    def wavenumber(self, n):
        return n * math.pi / self.box_length

    def energy(self, n):
        """E_n = hbar^2 kappa_n^2 / 2."""
        return 0.5 * (self.hbar * self.wavenumber(n)) ** 2

    def contains(self, x: float) -> bool:
        return abs(x) <= 0.5 * self.box_length * (1 + 1e-12)


class BoxGreenTerms(BaseModel):
    """The four additive terms of the perturbed container Green's function.

    Only ``bracket`` is antisymmetric under x <-> x'.
    """

    model_config = ConfigDict(frozen=True)

    free: complex
    bracket: complex
    contact: complex
    momentum: complex
    denominator: complex

    @property
    def total(self) -> complex:
        return self.free + self.bracket + self.contact + self.momentum


class GreenSplit(BaseModel):
    """Symmetric and antisymmetric parts under index exchange."""

    model_config = ConfigDict(frozen=True)

    sym: complex
    antisym: complex

    @property
    def value(self) -> complex:
        return self.sym + self.antisym


class QuadratureGrid(BaseModel):
    """Nodes and weights used by the general perturbed Green's function."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    nodes: np.ndarray
    weights: np.ndarray

    @model_validator(mode="after")
    def validate_shape(self) -> "QuadratureGrid":
        if self.nodes.shape != self.weights.shape or self.nodes.ndim != 1:
            raise ValueError("nodes and weights must be matching 1-D arrays")
        return self

    @classmethod
    def gauss_legendre(
        cls, lower: float, upper: float, panels: int = 8, nodes_per_panel: int = 64
    ) -> "QuadratureGrid":
        """Composite Gauss-Legendre rule on equal panels."""
        ref_nodes, ref_weights = leggauss(nodes_per_panel)
        edges = np.linspace(lower, upper, panels + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        nodes = (mid[:, None] + half[:, None] * ref_nodes[None, :]).ravel()
        weights = (half[:, None] * ref_weights[None, :]).ravel()
        return cls(nodes=nodes, weights=weights)

    @classmethod
    def lattice(cls, half_sites: int) -> "QuadratureGrid":
        """Unit-weight sum over sites -N..N."""
        nodes = np.arange(-half_sites, half_sites + 1, dtype=float)
        return cls(nodes=nodes, weights=np.ones_like(nodes))


class PoleRoot(BaseModel):
    """One root of the demon denominator."""

    model_config = ConfigDict(frozen=True)

    energy: float
    residual: float
    bracket_width: float


class PoleReport(BaseModel):
    """Result of a demon pole scan over an energy window."""

    e_lo: float
    e_hi: float
    roots: List[PoleRoot] = Field(default_factory=list)
    excluded: List[float] = Field(default_factory=list)
    flagged_extra_pole: Optional[float] = None

    @property
    def energies(self) -> List[float]:
        return [root.energy for root in self.roots]

    def to_lines(self) -> List[str]:
        """Line-oriented record: comment header, then one root per line."""
        lines = [
            "# demon pole report",
            f"# window {self.e_lo:.17g} {self.e_hi:.17g}",
            "# flagged_extra_pole "
            + ("none" if self.flagged_extra_pole is None else f"{self.flagged_extra_pole:.17g}"),
            "# excluded " + " ".join(f"{e:.17g}" for e in self.excluded),
        ]
        for root in self.roots:
            lines.append(
                f"energy={root.energy:.17g} residual={root.residual:.17g} "
                f"bracket_width={root.bracket_width:.17g}"
            )
        return lines

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "PoleReport":
        e_lo = e_hi = math.nan
        flagged: Optional[float] = None
        excluded: List[float] = []
        roots: List[PoleRoot] = []
        for raw in lines:
            line = raw.strip()
            if not line or line == "# demon pole report":
                continue
            if line.startswith("# window"):
                e_lo, e_hi = (float(v) for v in line.split()[2:4])
            elif line.startswith("# flagged_extra_pole"):
                token = line.split()[2]
                flagged = None if token == "none" else float(token)
            elif line.startswith("# excluded"):
                excluded = [float(v) for v in line.split()[2:]]
            else:
                fields = dict(item.split("=", 1) for item in line.split())
                roots.append(
                    PoleRoot(
                        energy=float(fields["energy"]),
                        residual=float(fields["residual"]),
                        bracket_width=float(fields["bracket_width"]),
                    )
                )
        return cls(e_lo=e_lo, e_hi=e_hi, roots=roots, excluded=excluded, flagged_extra_pole=flagged)


class AdjointSymmetryReport(BaseModel):
    """Defects of the advanced/retarded exchange relations."""

    model_config = ConfigDict(frozen=True)

    adjoint_defect: float
    symmetry_defect: float
    symmetry_defect_frobenius: float
    hamiltonian_is_real: bool
