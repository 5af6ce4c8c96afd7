"""Free container Green's function and the demon integrals P1, P2, Q1, Q2."""

import math
from typing import Optional, Union

import numpy as np
import structlog

from ...core.exceptions import (
    BoxPoleError,
    DegenerateBandError,
    DomainError,
    ValidationError,
)
from ...models.greens import ContainerSpec, IntegralMode
from ...models.potential import ActivationSpec
from .special import band_split, si, si_pair_approx

logger = structlog.get_logger(__name__)

POLE_TOLERANCE = 1e-9
MODE_FLOOR = 1e-12
COINCIDENT_TOLERANCE = 1e-12

Energy = Union[float, complex]


def _check_position(spec: ContainerSpec, *positions: float) -> None:
    for x in positions:
        if not spec.contains(x):
            raise DomainError(
                f"Position {x} lies outside the box [-L/2, L/2]", field="x", value=x
            )


def _safe_denominators(
    levels: np.ndarray, weights: np.ndarray, energy: Energy, labels: np.ndarray
) -> np.ndarray:
    """1/(E_n - E) with zero-residue poles dropped.

    Raises:
        BoxPoleError: If E sits on a level whose residue does not vanish
    """
    gaps = levels - energy
    near = np.abs(gaps) < POLE_TOLERANCE
    if np.any(near):
        hit = near & (np.abs(weights) > MODE_FLOOR)
        if np.any(hit):
            index = int(np.argmax(hit))
            raise BoxPoleError(
                f"Energy {energy} coincides with container level {int(labels[index])}",
                energy=float(np.real(levels[index])),
                mode=int(labels[index]),
            )
        gaps = np.where(near, 1.0, gaps)
        return np.where(near, 0.0, 1.0 / gaps)
    return 1.0 / gaps


def g0_box(x: float, x_prime: float, energy: Energy, spec: ContainerSpec) -> complex:
    """Eigenfunction expansion of the box resolvent, truncated at M even and M odd terms.

    Dropped terms at coincident points (x = x' or x = -x') are restored by
    integral comparison of their 1/E_n asymptote.

    Raises:
        BoxPoleError: If E is within 1e-9 of a level that couples x and x'
    """
    _check_position(spec, x, x_prime)
    length = spec.box_length
    terms = spec.series_terms
    m = np.arange(1, terms + 1)

    k_even = spec.wavenumber(2 * m)
    k_odd = spec.wavenumber(2 * m - 1)
    even_modes = np.sin(k_even * x) * np.sin(k_even * x_prime)
    odd_modes = np.cos(k_odd * x) * np.cos(k_odd * x_prime)

    even = even_modes * _safe_denominators(spec.energy(2 * m), even_modes, energy, 2 * m)
    odd = odd_modes * _safe_denominators(spec.energy(2 * m - 1), odd_modes, energy, 2 * m - 1)
    value = (2.0 / length) * (np.sum(even) + np.sum(odd))

    # products split into cos(k (x - x')) and cos(k (x + x')); only
    # non-oscillating ones leave a tail
    d_even, d_odd = _resonant_cosine(x - x_prime, length)
    s_even, s_odd = _resonant_cosine(x + x_prime, length)
    even_weight = 0.5 * (d_even - s_even)
    odd_weight = 0.5 * (d_odd + s_odd)
    if even_weight or odd_weight:
        asymptote = 2.0 * length**2 / (spec.hbar**2 * math.pi**2)
        even_tail = even_weight / (4.0 * (terms + 0.5))
        odd_tail = odd_weight / (4.0 * terms)
        value += (2.0 / length) * asymptote * (even_tail + odd_tail)
    return complex(value)


def _resonant_cosine(t: float, length: float):
    """Limit of cos(kappa_n t) for even and odd n when it does not oscillate."""
    scale = COINCIDENT_TOLERANCE * length
    if abs(t) < scale:
        return 1.0, 1.0
    if abs(abs(t) - length) < scale:
        return 1.0, -1.0
    return 0.0, 0.0


def g0_box_closed(x, x_prime, energy: Energy, spec: ContainerSpec):
    """Closed Dirichlet resolvent (2/hbar^2) sin(k(x< + L/2)) sin(k(L/2 - x>)) / (k sin kL)."""
    x = np.asarray(x, dtype=float)
    x_prime = np.asarray(x_prime, dtype=float)
    half = 0.5 * spec.box_length
    lower = np.minimum(x, x_prime)
    upper = np.maximum(x, x_prime)
    if energy == 0:
        value = (2.0 / spec.hbar**2) * (lower + half) * (half - upper) / spec.box_length + 0j
    else:
        k = np.sqrt(2.0 * complex(energy)) / spec.hbar
        wall = np.sin(k * spec.box_length)
        if abs(wall) < POLE_TOLERANCE:
            mode = int(round((k * spec.box_length / math.pi).real))
            raise BoxPoleError(
                f"Energy {energy} coincides with container level {mode}",
                energy=float(spec.energy(mode)),
                mode=mode,
            )
        modes = np.sin(k * (lower + half)) * np.sin(k * (half - upper))
        value = (2.0 / spec.hbar**2) * modes / (k * wall)
    return complex(value) if value.ndim == 0 else value


def g0_box_diagonal(energy: Energy, spec: ContainerSpec) -> complex:
    """G0(0, 0, E) = tan(L sqrt(2E) / 2 hbar) / (hbar sqrt(2E))."""
    if energy == 0:
        return complex(spec.box_length / (2.0 * spec.hbar**2))
    root = np.sqrt(2.0 * complex(energy))
    return complex(np.tan(spec.box_length * root / (2.0 * spec.hbar)) / (spec.hbar * root))


class ContainerIntegrals:
    """Demon integrals over the box for an unbounded activation band.

    P1(x) = Int V(y) G0(y, x), P2 = -P1, Q1 = Int Int V(x) G0(x, y) V(-y), Q2 = 0,
    with V = (V0/2) times the unit-strength Fourier kernel.
    """

    def __init__(self, spec: ContainerSpec, act: ActivationSpec, mode: IntegralMode):
        if act.has_uv_cutoff:
            raise ValidationError(
                "Container integrals are closed-form only for an unbounded activation band",
                field="p_uv",
                value=act.p_uv,
            )
        self.spec = spec
        self.act = act
        self.mode = IntegralMode(mode)
        self.band_a = act.p_ref * spec.box_length / 2.0

        ratio = self.band_a / math.pi
        if abs(ratio - round(ratio)) * math.pi < POLE_TOLERANCE:
            raise DegenerateBandError(
                f"P_R L / 2 = {self.band_a} is a multiple of pi", band_a=self.band_a
            )
        self.k, self.eps = band_split(self.band_a)
        self.coupling = 0.5 * act.strength

        self.n = np.arange(1, spec.series_terms + 1)
        self.wavenumbers = spec.wavenumber(2 * self.n)
        self.levels = spec.energy(2 * self.n)
        if self.mode is IntegralMode.EXACT:
            self.coefficients = (
                si(self.band_a + self.n * math.pi)
                - si(self.band_a - self.n * math.pi)
                - si(self.n * math.pi)
            )
            self.q1_weights = self.coefficients**2 / math.pi**2
        else:
            self.coefficients = 0.5 * math.pi - si_pair_approx(self.n, self.band_a)
            self.q1_weights = np.where(self.n == self.k, 0.0, 0.25)

        logger.debug(
            "Container integrals prepared",
            mode=self.mode.value,
            band_a=self.band_a,
            floor=self.k,
            fraction=self.eps,
            terms=spec.series_terms,
        )

    @property
    def extra_pole_energy(self) -> Optional[float]:
        """E_{2k} for k = floor(a/pi); None when k = 0."""
        if self.k < 1:
            return None
        return float(self.spec.energy(2 * self.k))

    def _prefactor(self) -> complex:
        # -(2 / (i pi L)) == 2i / (pi L)
        return self.coupling * 2j / (math.pi * self.spec.box_length)

    def p1(self, x, energy: Energy):
        """P1(x, E); vectorized over x."""
        x_arr = np.atleast_1d(np.asarray(x, dtype=float))
        _check_position(self.spec, *x_arr.tolist())
        shapes = np.sin(np.outer(x_arr, self.wavenumbers)) * self.coefficients
        inverse = _safe_denominators(
            self.levels, np.max(np.abs(shapes), axis=0), energy, 2 * self.n
        )
        value = self._prefactor() * (shapes @ inverse)
        return complex(value[0]) if np.ndim(x) == 0 else value

    def p2(self, x, energy: Energy):
        return -self.p1(x, energy)

    def p1_residue(self, x):
        """Coefficient r(x) of the 1/(E_{2k} - E) pole of P1."""
        if self.k < 1:
            return 0j
        index = self.k - 1
        shape = np.sin(self.wavenumbers[index] * np.asarray(x, dtype=float))
        return self._prefactor() * self.coefficients[index] * shape

    def _tail(self) -> float:
        spec = self.spec
        # (pi^2/4) weight on 1/E_{2n} = L^2 / (2 hbar^2 pi^2 n^2) beyond the cut
        return (
            (1.0 / (2.0 * spec.box_length))
            * spec.box_length**2
            / (2.0 * spec.hbar**2 * math.pi**2)
            / (spec.series_terms + 0.5)
        )

    def q1(self, energy: Energy) -> complex:
        """Q1(E) from the series; approx mode omits the n = floor(a/pi) term."""
        inverse = _safe_denominators(self.levels, self.q1_weights, energy, 2 * self.n)
        series = (2.0 / self.spec.box_length) * np.sum(self.q1_weights * inverse)
        return complex(self.coupling**2 * (series + self._tail()))

    def q1_closed(self, energy: Energy) -> complex:
        """Closed cotangent form of the approximated Q1."""
        spec = self.spec
        root = np.sqrt(2.0 * complex(energy))
        phase = spec.box_length * root / (2.0 * spec.hbar)
        value = 1.0 / (2.0 * complex(energy)) - spec.box_length / (
            2.0 * spec.hbar * root * np.tan(phase)
        )
        if self.k >= 1:
            value -= 1.0 / (self.spec.energy(2 * self.k) - energy)
        return complex(self.coupling**2 * value / (2.0 * spec.box_length))

    def q2(self, energy: Energy) -> complex:
        return 0j


def container_integrals(
    spec: ContainerSpec, act: ActivationSpec, mode: Union[IntegralMode, str] = IntegralMode.EXACT
) -> ContainerIntegrals:
    """Build the demon integrals for a container.

    Raises:
        DegenerateBandError: If P_R L / 2 is within 1e-9 of a multiple of pi
        ValidationError: If the activation band has a UV cutoff
    """
    return ContainerIntegrals(spec, act, IntegralMode(mode))
