"""Sine integral and its step-function approximation."""

import math

import numpy as np
from scipy.special import sici

from ...core.exceptions import ValidationError


def si(x):
    """Si(x) = Int_0^x sin(t)/t dt."""
    value = sici(np.asarray(x, dtype=float))[0]
    return float(value) if np.ndim(value) == 0 else value


def band_split(a: float):
    """Integer part floor(a/pi) and fractional part of a/pi."""
    ratio = a / math.pi
    k = math.floor(ratio)
    return k, ratio - k


def si_pair_approx(n, a: float):
    """Step approximation of Si(n pi + a) - Si(n pi - a).

    pi/2 - pi/2 Theta(n - k) + pi/2 Theta(k - n) + pi eps delta_{n,k}, with
    k = floor(a/pi), eps the fractional part and Theta(0) = 0.
    """
    n_arr = np.asarray(n)
    if np.any(n_arr < 1):
        raise ValidationError("Series index must be positive", field="n", value=n)
    k, eps = band_split(a)
    value = (
        0.5 * math.pi
        - 0.5 * math.pi * np.heaviside(n_arr - k, 0.0)
        + 0.5 * math.pi * np.heaviside(k - n_arr, 0.0)
        + math.pi * eps * (n_arr == k)
    )
    return float(value) if value.ndim == 0 else value
