"""Real roots of the demon denominator D(E) = 1 - G0(0,0,E) Q1(E)."""

import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Tuple

import numpy as np
import structlog

from ...core.config import settings
from ...core.exceptions import PoleScanError, ValidationError
from ...core.logging import log_stage_timing
from ...models.greens import ContainerSpec, IntegralMode, PoleReport, PoleRoot
from ...models.potential import ActivationSpec
from .container import ContainerIntegrals, container_integrals, g0_box_diagonal

logger = structlog.get_logger(__name__)

UNIFORM_SAMPLES = 64
EDGE_DECADES = range(1, 12)
SECANT_STEPS = 5
NUDGE = 1e-9


def evaluate_denominator(energy: float, integrals: ContainerIntegrals) -> complex:
    """D(E); approx integrals use the closed cotangent Q1, exact ones the Si series."""
    if integrals.mode is IntegralMode.APPROX:
        q1 = integrals.q1_closed(energy)
    else:
        q1 = integrals.q1(energy)
    return 1.0 - g0_box_diagonal(energy, integrals.spec) * q1


def _bisect(
    func: Callable[[float], float], lo: float, hi: float, f_lo: float, tol: float
) -> Tuple[float, float]:
    # keep [lo, hi] bracketing; a zero at mid goes to the lower half
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = func(mid)
        if f_lo * f_mid <= 0.0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return lo, hi


def _secant_polish(func: Callable[[float], float], lo: float, hi: float) -> float:
    old, x = lo, hi
    f_old, f_x = func(old), func(x)
    for _ in range(SECANT_STEPS):
        if f_x == f_old:
            break
        step = f_x * (x - old) / (f_x - f_old)
        candidate = x - step
        if not lo <= candidate <= hi:
            break
        old, f_old = x, f_x
        x, f_x = candidate, func(candidate)
        if f_x == 0.0:
            break
    return x if abs(f_x) <= abs(f_old) else old


def _sample_points(lo: float, hi: float) -> np.ndarray:
    width = hi - lo
    edges = np.array([10.0 ** (-d) for d in EDGE_DECADES])
    points = np.concatenate(
        [lo + width * edges, np.linspace(lo, hi, UNIFORM_SAMPLES + 1)[1:-1], hi - width * edges]
    )
    return np.unique(points)


class _Subinterval:
    """Root search on one analytic piece (lo, hi) of the window."""

    def __init__(self, func: Callable[[float], float], lo: float, hi: float, tol: float):
        self.func = func
        self.lo = lo
        self.hi = hi
        self.tol = tol

    def _value(self, energy: float) -> float:
        value = self.func(energy)
        if not math.isfinite(value):
            value = self.func(energy * (1.0 + NUDGE))
        if not math.isfinite(value):
            raise PoleScanError(
                f"Denominator is not finite near E={energy}", interval=(self.lo, self.hi)
            )
        return value

    def roots(self) -> List[PoleRoot]:
        points = _sample_points(self.lo, self.hi)
        values = np.array([self._value(e) for e in points])
        found: List[PoleRoot] = []
        for i in range(len(points) - 1):
            a, b = points[i], points[i + 1]
            f_a, f_b = values[i], values[i + 1]
            if f_a == 0.0:
                found.append(PoleRoot(energy=float(a), residual=0.0, bracket_width=0.0))
                continue
            if f_b == 0.0 or f_a * f_b > 0.0:
                continue
            lo, hi = _bisect(self._value, a, b, f_a, self.tol)
            energy = _secant_polish(self._value, lo, hi)
            found.append(
                PoleRoot(
                    energy=float(energy),
                    residual=abs(self._value(energy)),
                    bracket_width=float(hi - lo),
                )
            )
        if values[-1] == 0.0:
            found.append(PoleRoot(energy=float(points[-1]), residual=0.0, bracket_width=0.0))
        return found


def _singularities(e_lo: float, e_hi: float, spec: ContainerSpec) -> List[float]:
    """Container levels E_n inside (e_lo, e_hi): tan poles at odd n, cot poles at even n."""
    top = int(math.ceil(spec.box_length * math.sqrt(2.0 * e_hi) / (math.pi * spec.hbar))) + 1
    levels = spec.energy(np.arange(1, top + 1))
    return [float(e) for e in levels if e_lo < e < e_hi]


def demon_pole_scan(
    e_lo: float,
    e_hi: float,
    spec: ContainerSpec,
    act: ActivationSpec,
    bisect_tol: float = 1e-12,
    workers: Optional[int] = None,
) -> PoleReport:
    """Bracket, bisect and secant-polish the real roots of D(E) on [e_lo, e_hi].

    The window is cut at every container level; D is analytic between them.
    E_{2k}, k = floor(P_R L / 2 pi), is flagged and never reported as a root.

    Raises:
        ValidationError: If the window is not 0 < e_lo < e_hi
        PoleScanError: If D stays non-finite after a nudge
    """
    if not 0.0 < e_lo < e_hi:
        raise ValidationError(
            "Pole scan window needs 0 < e_lo < e_hi", field="window", value=(e_lo, e_hi)
        )
    start = time.perf_counter()
    integrals = container_integrals(spec, act, IntegralMode.APPROX)

    def real_denominator(energy: float) -> float:
        return float(evaluate_denominator(energy, integrals).real)

    cuts = _singularities(e_lo, e_hi, spec)
    edges = [e_lo] + cuts + [e_hi]
    pieces = [
        _Subinterval(real_denominator, lo, hi, bisect_tol) for lo, hi in zip(edges[:-1], edges[1:])
    ]

    with ThreadPoolExecutor(max_workers=workers or settings.max_workers) as pool:
        batches = list(pool.map(lambda piece: piece.roots(), pieces))

    flagged = integrals.extra_pole_energy
    roots = sorted((root for batch in batches for root in batch), key=lambda root: root.energy)
    if flagged is not None:
        roots = [root for root in roots if abs(root.energy - flagged) > bisect_tol]

    log_stage_timing(
        logger,
        "pole_scan",
        (time.perf_counter() - start) * 1000,
        window=(e_lo, e_hi),
        subintervals=len(pieces),
        roots=len(roots),
    )
    return PoleReport(
        e_lo=e_lo,
        e_hi=e_hi,
        roots=roots,
        excluded=cuts,
        flagged_extra_pole=flagged,
    )
