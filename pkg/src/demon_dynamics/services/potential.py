"""Activation function, its Fourier kernel and the lattice kernel."""

import math

import numpy as np

from ..core.exceptions import DomainError, ValidationError
from ..models.potential import ActivationSpec


def _step(x):
    # Theta(0) = 1/2 at band edges
    return np.heaviside(x, 0.5)


def activation_value(p, spec: ActivationSpec):
    """Evaluate V_act(p) = f_-(|p|) sgn(p) + f_+(|p|).

    Args:
        p: Momentum (scalar or array)
        spec: Activation bands

    Returns:
        Values in {0, 1/2, 1}; scalar input gives a float
    """
    p = np.asarray(p, dtype=float)
    if not np.all(np.isfinite(p)):
        raise DomainError("Momentum must be finite", field="p")
    mod = np.abs(p)
    inside = _step(spec.p_ref - mod)
    outside = _step(mod - spec.p_ref)
    cleaved = _step(mod - spec.p_uv) if spec.has_uv_cutoff else np.zeros_like(mod)
    f_plus = 0.5 * (inside + outside - cleaved)
    f_minus = 0.5 * (inside - outside + cleaved)
    value = f_minus * np.sign(p) + f_plus
    return float(value) if value.ndim == 0 else value


def fourier_value(y, spec: ActivationSpec):
    """Position-space kernel (1/2pi) Int dp e^{-ipy} V_act(p) for unit strength.

    Finite cutoff: (1 + e^{i P_UV y} - 2 cos P_R y) / (2 i pi y).
    Unbounded band: (1 - 2 cos P_R y) / (2 i pi y).

    Raises:
        DomainError: If any y is zero
    """
    y = np.asarray(y, dtype=float)
    if np.any(y == 0):
        raise DomainError("Fourier kernel is singular at y = 0", field="y", value=0.0)
    numerator = 1.0 - 2.0 * np.cos(spec.p_ref * y) + 0j
    if spec.has_uv_cutoff:
        numerator = numerator + np.exp(1j * spec.p_uv * y)
    value = numerator / (2j * math.pi * y)
    return complex(value) if value.ndim == 0 else value


def fourier_value_regularized(y, spec: ActivationSpec, eps: float):
    """Band integral evaluated at y + i eps; converges for an unbounded band."""
    if eps <= 0:
        raise ValidationError("eps must be positive", field="eps", value=eps)
    z = np.asarray(y, dtype=float) + 1j * eps
    if spec.has_uv_cutoff:
        upper = np.exp(1j * spec.p_uv * z)
    else:
        upper = np.zeros_like(z)
    value = (1.0 - np.exp(-1j * spec.p_ref * z) - np.exp(1j * spec.p_ref * z) + upper) / (
        2j * math.pi * z
    )
    return complex(value) if value.ndim == 0 else value


def fourier_value_extrapolated(y, spec: ActivationSpec, eps: float = 1e-4):
    """Richardson extrapolation of the regularized kernel to eps -> 0."""
    coarse = fourier_value_regularized(y, spec, eps)
    fine = fourier_value_regularized(y, spec, eps / 2)
    return 2 * fine - coarse


def lattice_kernel(n, kappa_r: float, kappa_d: float):
    """w(n) = (1/2pi) Int_B e^{i kappa n} d kappa over B = (0, k_R) u (-k_D, -k_R).

    w(n) = (2 cos(k_R n) - 1 - e^{-i k_D n}) / (2 i pi n), w(0) = k_D / (2 pi),
    and w(-n) = conj(w(n)).
    """
    if not 0 < kappa_r < kappa_d <= math.pi:
        raise ValidationError(
            "Lattice band requires 0 < kappa_r < kappa_d <= pi",
            field="kappa",
            value=(kappa_r, kappa_d),
        )
    n = np.asarray(n)
    if not np.issubdtype(n.dtype, np.integer):
        raise DomainError("Lattice kernel takes integer site indices", field="n")
    nf = n.astype(float)
    safe = np.where(n == 0, 1.0, nf)
    numerator = 2.0 * np.cos(kappa_r * nf) - 1.0 - np.exp(-1j * kappa_d * nf)
    value = np.where(n == 0, kappa_d / (2 * math.pi) + 0j, numerator / (2j * math.pi * safe))
    return complex(value) if value.ndim == 0 else value
