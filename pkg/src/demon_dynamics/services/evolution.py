"""Initial states and spectral time evolution."""

import time
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np
import structlog

from ..core.config import settings
from ..core.exceptions import NormDriftError, ValidationError
from ..core.logging import log_stage_timing
from ..models.evolution import InitialStateKind, InitialStateSpec, WaveTrace
from ..models.lattice import EigenSystem
from .lattice import mode_shapes

logger = structlog.get_logger(__name__)

NORM_TOLERANCE = 1e-10
CHUNK_SIZE = 256


def _normalized(vector: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(vector))
    if norm == 0.0 or not np.isfinite(norm):
        raise ValidationError("Initial state has zero norm", field="vector", value=norm)
    return vector / norm


def initial_state(spec: InitialStateSpec, half_sites: int) -> np.ndarray:
    """Build a unit-norm site vector on -N..N.

    Boltzmann: sum over q = 1..2N+1 of exp(-beta (q^2 - 1)) sin(q pi (n + N + s) / span),
    with the wall convention of the spec, then normalized.

    Raises:
        ValidationError: If an explicit vector has the wrong size or zero norm
    """
    dim = 2 * half_sites + 1
    if spec.kind is InitialStateKind.BOLTZMANN:
        q = np.arange(1, dim + 1)
        weights = np.exp(-spec.beta * (q.astype(float) ** 2 - 1.0))
        vector = weights @ mode_shapes(q, half_sites, spec.convention) + 0j
    elif spec.kind is InitialStateKind.UNIFORM:
        vector = np.ones(dim, dtype=complex)
    else:
        vector = np.asarray(spec.vector, dtype=complex)
        if vector.shape != (dim,):
            raise ValidationError(
                f"Explicit state must have {dim} entries", field="vector", value=vector.shape
            )
    return _normalized(vector)


def _reconstruct(eig: EigenSystem, coefficients: np.ndarray, taus: np.ndarray) -> np.ndarray:
    phases = np.exp(-1j * np.outer(taus, eig.values))
    return (phases * coefficients) @ eig.vectors.T


def propagate(
    eig: EigenSystem, psi0: np.ndarray, taus, workers: Optional[int] = None
) -> WaveTrace:
    """Psi(tau) = sum_m exp(-i tau Xi_m) <nu_m|psi0> nu_m for every tau.

    Raises:
        ValidationError: On a dimension mismatch, a non-unit psi0 or a bad tau grid
        NormDriftError: If some propagated state drifts off unit norm
    """
    psi0 = np.asarray(psi0, dtype=complex)
    taus = np.asarray(taus, dtype=float)
    if psi0.shape != (eig.dim,):
        raise ValidationError(
            f"State has {psi0.shape} entries, eigensystem has {eig.dim}", field="psi0"
        )
    defect = abs(float(np.linalg.norm(psi0)) - 1.0)
    if defect > NORM_TOLERANCE:
        raise ValidationError("Initial state is not normalized", field="psi0", value=defect)
    if taus.ndim != 1 or taus.size == 0:
        raise ValidationError("Time grid must be a non-empty 1-D array", field="taus")

    start = time.perf_counter()
    coefficients = eig.vectors.conj().T @ psi0
    chunks = [taus[i : i + CHUNK_SIZE] for i in range(0, taus.size, CHUNK_SIZE)]
    with ThreadPoolExecutor(max_workers=workers or settings.max_workers) as pool:
        blocks = list(pool.map(lambda chunk: _reconstruct(eig, coefficients, chunk), chunks))

    trace = WaveTrace(taus=taus, states=np.vstack(blocks))
    drift = trace.norm_defect()
    if drift > NORM_TOLERANCE:
        raise NormDriftError(f"Propagation lost unit norm (defect {drift:.3g})", norm_defect=drift)
    log_stage_timing(
        logger,
        "propagate",
        (time.perf_counter() - start) * 1000,
        dim=eig.dim,
        steps=taus.size,
        norm_defect=drift,
    )
    return trace


def time_reversal_witness(eig: EigenSystem, psi0: np.ndarray, taus) -> float:
    """Largest site-density gap between evolution under H and under conj(H).

    Zero for a real Hamiltonian and a real initial state.
    """
    forward = propagate(eig, psi0, taus)
    mirrored = EigenSystem(values=eig.values.copy(), vectors=eig.vectors.conj())
    backward = propagate(mirrored, np.conj(psi0), taus)
    return float(np.max(np.abs(forward.density() - backward.density())))
