"""Perturbed Green's functions: point interaction and the demon coupling."""

from typing import Callable, Union

import numpy as np
import structlog

from ...core.exceptions import ResonancePoleError
from ...models.greens import BoxGreenTerms, ContainerSpec, GreenSplit, IntegralMode, QuadratureGrid
from ...models.potential import ActivationSpec
from .container import container_integrals, g0_box_closed, g0_box_diagonal

logger = structlog.get_logger(__name__)

RESONANCE_TOLERANCE = 1e-10

Energy = Union[float, complex]
GreenEvaluator = Callable[..., object]


def _check_denominator(value: complex, energy: Energy, kind: str) -> None:
    if not np.isfinite(value) or abs(value) < RESONANCE_TOLERANCE:
        raise ResonancePoleError(
            f"{kind} denominator vanishes at E={energy}",
            energy=energy,
            denominator=value,
            kind=kind,
        )


def g_delta(x, x_prime, energy: Energy, strength: float, g0: GreenEvaluator) -> complex:
    """G0 - V0 G0(x,0) G0(0,x') / (1 + V0 G0(0,0)) for a point interaction at the origin.

    Raises:
        ResonancePoleError: If 1 + V0 G0(0, 0, E) vanishes (bound state)
    """
    denominator = 1.0 + strength * complex(g0(0, 0, energy))
    _check_denominator(denominator, energy, "delta")
    return complex(
        g0(x, x_prime, energy)
        - strength * g0(x, 0, energy) * g0(0, x_prime, energy) / denominator
    )


def g_p_general(
    g0: GreenEvaluator,
    vtilde: Callable[[np.ndarray], np.ndarray],
    x,
    x_prime,
    energy: Energy,
    grid: QuadratureGrid,
) -> complex:
    """Demon-perturbed Green's function for an arbitrary base evaluator.

    The interaction acts as (W psi)(x) = vtilde(-x) psi(0) + delta(x) Int vtilde(y) psi(y).
    With P1(x') = Int vtilde(y) G0(y, x'), P2(x) = Int G0(x, y) vtilde(-y),
    Q1 = Int Int vtilde(y) G0(y, z) vtilde(-z) and Q2 = P1(0), the result is
    G0 + G0(x,0) G0(0,x') Q3 / Den - G0(x,0) R1(x') (1 + P2(0)) / Den
    - P2(x) (G0(0,x') - G0(0,0) R1(x')) / Den, with R1 = P1 / (1 + Q2),
    Q3 = Q1 / (1 + Q2) and Den = 1 + P2(0) - G0(0,0) Q3.

    Raises:
        ResonancePoleError: If 1 + Q2 or Den vanishes
    """
    nodes, weights = grid.nodes, grid.weights
    forward = weights * np.asarray(vtilde(nodes))
    backward = weights * np.asarray(vtilde(-nodes))

    block = np.asarray(g0(nodes[:, None], nodes[None, :], energy))
    p1 = complex(forward @ np.asarray(g0(nodes, x_prime, energy)))
    p1_origin = complex(forward @ np.asarray(g0(nodes, 0.0, energy)))
    p2 = complex(np.asarray(g0(x, nodes, energy)) @ backward)
    p2_origin = complex(np.asarray(g0(0.0, nodes, energy)) @ backward)
    q1 = complex(forward @ block @ backward)
    q2 = p1_origin

    shift = 1.0 + q2
    _check_denominator(shift, energy, "momentum")
    r1 = p1 / shift
    q3 = q1 / shift

    g0_origin = complex(g0(0.0, 0.0, energy))
    g0_x0 = complex(g0(x, 0.0, energy))
    g0_0x = complex(g0(0.0, x_prime, energy))
    denominator = 1.0 + p2_origin - g0_origin * q3
    _check_denominator(denominator, energy, "demon")

    return complex(
        g0(x, x_prime, energy)
        + g0_x0 * g0_0x * q3 / denominator
        - g0_x0 * r1 * (1.0 + p2_origin) / denominator
        - p2 * (g0_0x - g0_origin * r1) / denominator
    )


def g_p_box_terms(
    x: float,
    x_prime: float,
    energy: Energy,
    spec: ContainerSpec,
    act: ActivationSpec,
    mode: Union[IntegralMode, str] = IntegralMode.EXACT,
) -> BoxGreenTerms:
    """Split the container G_p into its free, bracket, contact and momentum terms.

    Raises:
        BoxPoleError: If E sits on a container level
        ResonancePoleError: If D = 1 - G0(0,0) Q1 vanishes
    """
    integrals = container_integrals(spec, act, mode)
    g0_origin = g0_box_diagonal(energy, spec)
    q1 = integrals.q1(energy)
    denominator = 1.0 - g0_origin * q1
    _check_denominator(denominator, energy, "demon")

    p1_x = integrals.p1(x, energy)
    p1_xp = integrals.p1(x_prime, energy)
    g0_x0 = g0_box_closed(x, 0.0, energy, spec)
    g0_0x = g0_box_closed(0.0, x_prime, energy, spec)

    return BoxGreenTerms(
        free=g0_box_closed(x, x_prime, energy, spec),
        bracket=(p1_x * g0_0x - g0_x0 * p1_xp) / denominator,
        contact=g0_x0 * g0_0x * q1 / denominator,
        momentum=-p1_x * g0_origin * p1_xp / denominator,
        denominator=denominator,
    )


def g_p_box(
    x: float,
    x_prime: float,
    energy: Energy,
    spec: ContainerSpec,
    act: ActivationSpec,
    mode: Union[IntegralMode, str] = IntegralMode.EXACT,
) -> complex:
    """Demon-perturbed container Green's function."""
    return g_p_box_terms(x, x_prime, energy, spec, act, mode).total


def antisymmetric_part(g: GreenEvaluator, x, x_prime, energy: Energy) -> GreenSplit:
    """Split g(x, x') into parts symmetric and antisymmetric under x <-> x'."""
    forward = complex(g(x, x_prime, energy))
    backward = complex(g(x_prime, x, energy))
    antisym = 0.5 * (forward - backward)
    # sym is taken as the remainder so sym + antisym rebuilds forward
    return GreenSplit(sym=forward - antisym, antisym=antisym)
