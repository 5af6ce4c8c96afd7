"""Discretized demon Hamiltonian, its spectrum and resolvents."""

import math
import time
from typing import Dict, Union

import numpy as np
import scipy.linalg as la
import structlog
from scipy.optimize import brentq

from ..core.exceptions import ConditioningError, EigenSolverError, ValidationError
from ..core.logging import log_stage_timing
from ..models.lattice import EigenSystem, HamiltonianMatrix, LatticeConfig, WallConvention
from .potential import lattice_kernel

logger = structlog.get_logger(__name__)

EIGEN_TOLERANCE = 1e-10
CONDITION_LIMIT = 1e12

MatrixLike = Union[HamiltonianMatrix, np.ndarray]


def as_matrix(hamiltonian: MatrixLike) -> np.ndarray:
    if isinstance(hamiltonian, HamiltonianMatrix):
        return hamiltonian.entries
    return np.asarray(hamiltonian)


def assemble_hamiltonian(config: LatticeConfig) -> HamiltonianMatrix:
    """Build the rescaled Hamiltonian on sites -N..N with Dirichlet walls.

    The kinetic part is the tridiagonal (2, -1) stencil; the demon couples
    site 0 to every site through column 0 (w(n)) and row 0 (conj w(n')).
    """
    dim = config.dim
    entries = np.zeros((dim, dim), dtype=complex)
    entries += 2.0 * np.eye(dim) - np.eye(dim, k=1) - np.eye(dim, k=-1)

    centre = config.half_sites
    kernel = config.upsilon0 * lattice_kernel(config.sites, config.kappa_r, config.kappa_d)
    entries[:, centre] += kernel
    entries[centre, :] += kernel.conj()

    hamiltonian = HamiltonianMatrix(config=config, entries=entries)
    logger.debug(
        "Hamiltonian assembled",
        dim=dim,
        upsilon0=config.upsilon0,
        hermiticity_defect=hamiltonian.hermiticity_defect,
    )
    return hamiltonian


def eigendecompose(hamiltonian: MatrixLike) -> EigenSystem:
    """Full Hermitian eigendecomposition with residual and orthogonality checks.

    Raises:
        EigenSolverError: If the residual or orthogonality contract fails
    """
    start = time.perf_counter()
    matrix = as_matrix(hamiltonian)
    values, vectors = la.eigh(matrix)
    order = np.argsort(values, kind="stable")
    values, vectors = values[order], vectors[:, order]

    scale = max(float(la.norm(matrix, 2)), 1.0)
    residual = float(np.max(np.linalg.norm(matrix @ vectors - vectors * values, axis=0))) / scale
    gram = vectors.conj().T @ vectors
    orthogonality = float(np.max(np.abs(gram - np.eye(len(values)))))
    if residual > EIGEN_TOLERANCE or orthogonality > EIGEN_TOLERANCE:
        raise EigenSolverError(
            "Eigendecomposition violates its residual contract",
            residual=residual,
            orthogonality=orthogonality,
        )

    log_stage_timing(
        logger,
        "eigendecompose",
        (time.perf_counter() - start) * 1000,
        dim=len(values),
        residual=residual,
        orthogonality=orthogonality,
    )
    return EigenSystem(values=values, vectors=vectors.astype(complex))


def direct_resolvent(
    hamiltonian: MatrixLike, energy: float, eps: float, sign: int = 1
) -> np.ndarray:
    """Dense inverse of (H - E - sign * i * eps).

    Raises:
        ConditioningError: If the shifted matrix is numerically singular
    """
    if sign not in (1, -1):
        raise ValidationError("sign must be +1 or -1", field="sign", value=sign)
    matrix = as_matrix(hamiltonian)
    shifted = matrix - (energy + sign * 1j * eps) * np.eye(matrix.shape[0])
    condition = float(np.linalg.cond(shifted))
    if not np.isfinite(condition) or condition > CONDITION_LIMIT:
        raise ConditioningError(
            f"Resolvent at E={energy} is ill-conditioned", condition=condition
        )
    return la.inv(shifted)


def spectral_resolvent(eig: EigenSystem, energy: float, eps: float, sign: int = 1) -> np.ndarray:
    """Sum_m nu_m nu_m^dagger / (Xi_m - E - sign * i * eps)."""
    weights = 1.0 / (eig.values - energy - sign * 1j * eps)
    return (eig.vectors * weights) @ eig.vectors.conj().T


class LatticeResolvent:
    """Adapts a dense Hamiltonian to the Green's evaluator signature g(n, n', E).

    Site labels n are mapped to row n + N; the inverse is cached per energy.
    """

    def __init__(self, matrix: np.ndarray, half_sites: int):
        self.matrix = np.asarray(matrix)
        self.half_sites = half_sites
        self._cache: Dict[complex, np.ndarray] = {}

    def resolvent(self, energy: complex) -> np.ndarray:
        key = complex(energy)
        if key not in self._cache:
            shifted = self.matrix - key * np.eye(self.matrix.shape[0])
            self._cache = {key: la.inv(shifted)}
        return self._cache[key]

    def __call__(self, x, x_prime, energy):
        rows = np.rint(np.asarray(x)).astype(int) + self.half_sites
        cols = np.rint(np.asarray(x_prime)).astype(int) + self.half_sites
        return self.resolvent(energy)[rows, cols]


def free_chain_spectrum(half_sites: int) -> np.ndarray:
    """Closed-form Dirichlet-chain eigenvalues 2(1 - cos(q pi / (2N + 2)))."""
    q = np.arange(1, 2 * half_sites + 2)
    return 2.0 * (1.0 - np.cos(q * math.pi / (2 * half_sites + 2)))


def free_box_mode(
    q: int, half_sites: int, convention: WallConvention = WallConvention.LATTICE
) -> np.ndarray:
    """Normalized sine mode sin(q pi (n + N + s) / span) on sites -N..N.

    EDGE_SITES: span 2N, s = 0, q in [1, 2N-1] (q = 2N vanishes, q = 2N+1 aliases 2N-1).
    LATTICE: span 2N+2, s = 1, q in [1, 2N+1]; these are the free chain eigenvectors.
    """
    top = convention.max_mode(half_sites)
    if not 1 <= q <= top:
        raise ValidationError(
            f"Mode index must lie in [1, {top}] for the {convention.value} convention",
            field="q",
            value=q,
        )
    shape = mode_shapes(np.array([q]), half_sites, convention)[0]
    return shape / np.linalg.norm(shape)


def mode_shapes(q: np.ndarray, half_sites: int, convention: WallConvention) -> np.ndarray:
    """Unnormalized sine shapes, one row per q."""
    offset = 0 if convention is WallConvention.EDGE_SITES else 1
    n = np.arange(-half_sites, half_sites + 1)
    phase = math.pi * (n + half_sites + offset) / convention.span(half_sites)
    return np.sin(np.outer(q, phase))


def free_box_basis(
    half_sites: int, convention: WallConvention = WallConvention.LATTICE
) -> np.ndarray:
    """All orthonormal modes of a convention as rows."""
    q = np.arange(1, convention.max_mode(half_sites) + 1)
    shapes = mode_shapes(q, half_sites, convention)
    return shapes / np.linalg.norm(shapes, axis=1, keepdims=True)


def _parabolic_error(kappa: float) -> float:
    # 2(1 - cos k) = 4 sin^2(k/2)
    return abs(4.0 * math.sin(0.5 * kappa) ** 2 - kappa**2) / kappa**2


def dispersion_parabolic_range(tol: float) -> float:
    """Largest kappa in (0, pi] where 2(1 - cos k) stays within tol of k^2."""
    if not 0 < tol < 1:
        raise ValidationError("tol must lie in (0, 1)", field="tol", value=tol)
    if _parabolic_error(math.pi) <= tol:
        return math.pi
    # the relative error 1 - sinc^2(k/2) grows monotonically on (0, pi]
    lower = 0.5 * math.sqrt(12.0 * tol)
    return brentq(lambda k: _parabolic_error(k) - tol, lower, math.pi, xtol=1e-14)


def parity_commutator_norm(hamiltonian: MatrixLike) -> float:
    """Frobenius norm of [H, Pi] with Pi the site reflection n -> -n."""
    matrix = as_matrix(hamiltonian)
    reflection = np.fliplr(np.eye(matrix.shape[0]))
    return float(np.linalg.norm(matrix @ reflection - reflection @ matrix))
