"""Green's functions of the free and demon-perturbed container."""

from .container import (
    ContainerIntegrals,
    container_integrals,
    g0_box,
    g0_box_closed,
    g0_box_diagonal,
)
from .perturbed import antisymmetric_part, g_delta, g_p_box, g_p_box_terms, g_p_general
from .poles import demon_pole_scan, evaluate_denominator
from .special import band_split, si, si_pair_approx
from .symmetry import adjoint_symmetry_check

__all__ = [
    "ContainerIntegrals",
    "adjoint_symmetry_check",
    "antisymmetric_part",
    "band_split",
    "container_integrals",
    "demon_pole_scan",
    "evaluate_denominator",
    "g0_box",
    "g0_box_closed",
    "g0_box_diagonal",
    "g_delta",
    "g_p_box",
    "g_p_box_terms",
    "g_p_general",
    "si",
    "si_pair_approx",
]
