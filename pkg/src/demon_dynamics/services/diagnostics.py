"""Observables of a run: entropy, lateral balance, demon work and revivals."""

import math
from typing import List, Optional, Tuple

import numpy as np
import structlog
from scipy.integrate import cumulative_trapezoid
from scipy.signal import find_peaks

from ..core.exceptions import SideEnergyError, UnderdeterminedFitError, ValidationError
from ..models.diagnostics import (
    DISPLAY_TIME_UNIT,
    EntropyBudget,
    EntropyDip,
    EntropyLedger,
    LateralGapPeak,
    LateralObservables,
    ObservableSeries,
    RevivalTimes,
)
from ..models.evolution import WaveTrace
from ..models.lattice import HamiltonianMatrix, WallConvention
from .lattice import MatrixLike, as_matrix, free_box_basis

logger = structlog.get_logger(__name__)

SIDE_FLOOR = 1e-12
POPULATION_FLOOR = 1e-12
MIN_FIT_MODES = 3
# display time at which the initial expansion has filled the box
EXPANSION_DISPLAY_TIME = 5.0
DIP_SEPARATION = 2.0


def populations(
    psi: np.ndarray, half_sites: int, convention: WallConvention = WallConvention.LATTICE
) -> np.ndarray:
    """rho_q = |<q|psi>|^2 in the free-box basis; last axis of psi is the site axis."""
    basis = free_box_basis(half_sites, convention)
    return np.abs(np.asarray(psi) @ basis.T) ** 2


def _entropy(rho: np.ndarray) -> np.ndarray:
    # 0 ln 0 = 0
    safe = np.where(rho > 0.0, rho, 1.0)
    return -np.sum(np.where(rho > 0.0, rho * np.log(safe), 0.0), axis=-1)


def shannon_entropy(
    psi: np.ndarray, half_sites: int, convention: WallConvention = WallConvention.LATTICE
) -> float:
    """-sum rho ln rho over free-box populations (natural log)."""
    return float(_entropy(populations(psi, half_sites, convention)))


def _side_weights(dim: int) -> Tuple[np.ndarray, np.ndarray]:
    centre = dim // 2
    left = np.zeros(dim)
    left[:centre] = 1.0
    left[centre] = 0.5
    return left, left[::-1].copy()


def side_probabilities(psi: np.ndarray) -> Tuple[float, float]:
    """(p_left, p_right) with site 0 shared half and half."""
    density = np.abs(np.asarray(psi)) ** 2
    left, right = _side_weights(density.shape[-1])
    return float(density @ left), float(density @ right)


def _side_energies(
    states: np.ndarray, matrix: np.ndarray, weights: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    projected = states * np.sqrt(weights)
    probability = np.sum(np.abs(projected) ** 2, axis=-1)
    energy = np.real(np.sum(projected.conj() * (projected @ matrix.T), axis=-1))
    return probability, energy


def lateral_observables(psi: np.ndarray, hamiltonian: MatrixLike) -> LateralObservables:
    """Side probabilities and <P_s psi|H|P_s psi> / p_s for both sides.

    Raises:
        SideEnergyError: If a side carries less than 1e-12 probability
    """
    matrix = as_matrix(hamiltonian)
    psi = np.asarray(psi, dtype=complex)
    left, right = _side_weights(psi.shape[0])
    p_left, raw_left = _side_energies(psi, matrix, left)
    p_right, raw_right = _side_energies(psi, matrix, right)
    for side, probability in (("left", p_left), ("right", p_right)):
        if probability < SIDE_FLOOR:
            raise SideEnergyError(
                f"Side energy undefined: {side} probability {probability:.3e}",
                side=side,
                probability=float(probability),
            )
    return LateralObservables(
        p_left=float(p_left),
        p_right=float(p_right),
        e_left=float(raw_left / p_left),
        e_right=float(raw_right / p_right),
    )


def running_mean(values: np.ndarray, taus: np.ndarray) -> np.ndarray:
    """Trapezoidal mean of values over [tau_0, tau]; the first entry is values[0]."""
    integral = cumulative_trapezoid(values, taus, initial=0.0)
    span = taus - taus[0]
    out = np.array(values, dtype=float, copy=True)
    np.divide(integral, span, out=out, where=span > 0)
    return out


def potential_work(trace: WaveTrace, potential: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """<Psi(tau)|V|Psi(tau)> and its running time average."""
    if trace.taus.size == 0:
        raise ValidationError("Trace is empty", field="trace")
    states = trace.states
    expectation = np.sum(states.conj() * (states @ np.asarray(potential).T), axis=1)
    v_avg = np.real(expectation)
    return v_avg, running_mean(v_avg, trace.taus)


def entropy_budget(delta_sp: float, delta_v: float, inv_t: float) -> EntropyBudget:
    """Demon bound (1/T) dV and total bound dS_p + (1/T) dV.

    Raises:
        ValidationError: If inv_t is not positive
    """
    if not inv_t > 0:
        raise ValidationError("1/T must be positive", field="inv_t", value=inv_t)
    demon = inv_t * delta_v
    return EntropyBudget(delta_sd_bound=demon, delta_st_bound=delta_sp + demon)


def two_compartment_entropy_drop(
    pressure_r: float, pressure_l: float, temp_r: float, temp_l: float, volume: float
) -> float:
    """-(P_R / T_R + P_L / T_L) v ln 2 for sorting into two compartments.

    Raises:
        ValidationError: On nonpositive temperature or volume
    """
    if temp_r <= 0 or temp_l <= 0:
        raise ValidationError(
            "Temperatures must be positive", field="temperature", value=(temp_r, temp_l)
        )
    if volume <= 0:
        raise ValidationError("Volume must be positive", field="volume", value=volume)
    return -(pressure_r / temp_r + pressure_l / temp_l) * volume * math.log(2.0)


def revival_estimate(
    half_sites: int, convention: WallConvention = WallConvention.EDGE_SITES
) -> RevivalTimes:
    """Revival times of the quadratic box spectrum Xi_q = q^2 pi^2 / span^2."""
    if half_sites < 1:
        raise ValidationError("half_sites must be positive", field="half_sites", value=half_sites)
    span = convention.span(half_sites)
    tau_full = 2.0 * span**2 / math.pi
    return RevivalTimes(tau_full=tau_full, tau_quarter=tau_full / 4.0)


def effective_beta_fit(
    psi: np.ndarray, half_sites: int, convention: WallConvention = WallConvention.LATTICE
) -> float:
    """Slope fit of ln rho_q = -2 beta (q^2 - 1) + c over modes with rho_q > 1e-12.

    Raises:
        UnderdeterminedFitError: If fewer than three modes are populated
    """
    rho = populations(psi, half_sites, convention)
    q = np.arange(1, rho.size + 1)
    usable = rho > POPULATION_FLOOR
    count = int(np.count_nonzero(usable))
    if count < MIN_FIT_MODES:
        raise UnderdeterminedFitError(
            f"Effective beta needs {MIN_FIT_MODES} populated modes, found {count}",
            usable_modes=count,
        )
    slope, _ = np.polyfit(q[usable] ** 2 - 1.0, np.log(rho[usable]), 1)
    return float(-0.5 * slope)


def compute_observables(
    trace: WaveTrace,
    hamiltonian: HamiltonianMatrix,
    convention: WallConvention = WallConvention.LATTICE,
) -> ObservableSeries:
    """Every per-tau observable of a trace.

    Raises:
        SideEnergyError: If a side empties at some tau
    """
    states = trace.states
    matrix = hamiltonian.entries
    left, right = _side_weights(states.shape[1])
    p_left, raw_left = _side_energies(states, matrix, left)
    p_right, raw_right = _side_energies(states, matrix, right)
    for side, probability in (("left", p_left), ("right", p_right)):
        if np.any(probability < SIDE_FLOOR):
            raise SideEnergyError(
                f"Side energy undefined: {side} side empties during the run",
                side=side,
                probability=float(np.min(probability)),
            )
    v_avg, v_timeavg = potential_work(trace, hamiltonian.potential_part())
    return ObservableSeries(
        tau=trace.taus,
        entropy=_entropy(populations(states, trace.half_sites, convention)),
        p_left=p_left,
        p_right=p_right,
        e_left=raw_left / p_left,
        e_right=raw_right / p_right,
        v_avg=v_avg,
        v_timeavg=v_timeavg,
    )


def find_entropy_dips(series: ObservableSeries) -> List[EntropyDip]:
    """Local entropy minima that fall below the initial entropy."""
    entropy = series.entropy
    if entropy.size < 3:
        return []
    initial = float(entropy[0])
    indices, _ = find_peaks(-entropy)
    return [
        EntropyDip(
            tau=float(series.tau[i]), entropy=float(entropy[i]), depth=initial - float(entropy[i])
        )
        for i in indices
        if entropy[i] < initial
    ]


def principal_entropy_dips(
    series: ObservableSeries, count: int = 2, separation: float = DIP_SEPARATION
) -> List[EntropyDip]:
    """The deepest dips lying at least ``separation`` display units apart, in time order."""
    if count < 1:
        raise ValidationError("count must be positive", field="count", value=count)
    chosen: List[EntropyDip] = []
    for dip in sorted(find_entropy_dips(series), key=lambda dip: dip.depth, reverse=True):
        if all(abs(dip.display_time - kept.display_time) >= separation for kept in chosen):
            chosen.append(dip)
        if len(chosen) == count:
            break
    return sorted(chosen, key=lambda dip: dip.tau)


def segregation_peak(
    series: ObservableSeries,
    half_sites: int,
    expansion_display_time: float = EXPANSION_DISPLAY_TIME,
) -> Optional[LateralGapPeak]:
    """Largest |p_right - p_left| after the initial expansion and before the quarter revival.

    The initial state's own bias is excluded; None if the run ends before the window opens.
    """
    opens = expansion_display_time * DISPLAY_TIME_UNIT
    closes = revival_estimate(half_sites).tau_quarter
    window = np.flatnonzero((series.tau >= opens) & (series.tau <= closes))
    if window.size == 0:
        return None
    gap = np.abs(series.p_right - series.p_left)
    best = int(window[np.argmax(gap[window])])
    return LateralGapPeak(tau=float(series.tau[best]), gap=float(gap[best]))


def entropy_ledger(series: ObservableSeries, inv_t: float) -> EntropyLedger:
    """Budget between the first and last tau of a run, with its entropy dips."""
    delta_sp = float(series.entropy[-1] - series.entropy[0])
    delta_v = float(series.v_avg[-1] - series.v_avg[0])
    return EntropyLedger(
        delta_sp=delta_sp,
        delta_v=delta_v,
        budget=entropy_budget(delta_sp, delta_v, inv_t),
        dips=find_entropy_dips(series),
    )
