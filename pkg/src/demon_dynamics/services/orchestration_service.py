"""Run orchestration for the batch commands."""

import functools
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
import structlog

from .. import __version__
from ..core.config import settings
from ..core.exceptions import DemonDynamicsError, PoleVerificationError, ValidationError
from ..core.logging import log_stage_timing, run_context
from ..models.diagnostics import ObservableSeries
from ..models.evolution import WaveTrace
from ..models.greens import IntegralMode
from ..models.lattice import EigenSystem, HamiltonianMatrix
from ..models.run import Artifact, RunConfig, RunManifest
from .diagnostics import (
    compute_observables,
    find_entropy_dips,
    principal_entropy_dips,
    revival_estimate,
    segregation_peak,
)
from .evolution import initial_state, propagate
from .greens import (
    antisymmetric_part,
    container_integrals,
    demon_pole_scan,
    evaluate_denominator,
    g0_box_closed,
    g_delta,
    g_p_box,
)
from .lattice import assemble_hamiltonian, eigendecompose
from .serialization import (
    config_digest,
    config_payload,
    read_pole_report,
    write_density_csv,
    write_frame,
    write_manifest,
    write_observables_csv,
    write_pole_report,
    write_sweep_csv,
)

logger = structlog.get_logger(__name__)

OBSERVABLES_FILE = "observables.csv"
DENSITY_FILE = "density.csv"
EIGENSYSTEM_FILE = "eigensystem.bin"
MANIFEST_FILE = "manifest.json"
POLES_FILE = "poles.txt"
SWEEP_FILE = "sweep_entropy.csv"
GREENS_FILE = "greens.csv"

ROOT_TOLERANCE = 1e-10
GREEN_KINDS = ("demon", "delta")


def _logged_run(command: str):
    """Bind the command and a short config digest to every log line of the run."""

    def decorate(method):
        @functools.wraps(method)
        def wrapper(self, *args, **kwargs):
            with run_context(command=command, config_sha256=config_digest(self.config)[:12]):
                return method(self, *args, **kwargs)

        return wrapper

    return decorate


class RunOrchestrator:
    """Runs evolve, sweep, poles and greens jobs and records their manifests."""

    def __init__(self, config: RunConfig, workers: Optional[int] = None):
        self.config = config
        self.workers = workers or settings.max_workers
        self.output_dir = Path(config.output_dir)

    def _manifest(self, command: str, outputs: List[Path], **fields) -> RunManifest:
        manifest = RunManifest(
            command=command,
            code_version=__version__,
            config_sha256=config_digest(self.config),
            config=config_payload(self.config),
            outputs=[path.name for path in outputs],
            **fields,
        )
        write_manifest(manifest, self.output_dir / MANIFEST_FILE)
        return manifest

    def taus(self) -> np.ndarray:
        return np.linspace(0.0, self.config.tau_max, self.config.tau_steps)

    def prepare_spectrum(self) -> Tuple[HamiltonianMatrix, EigenSystem]:
        hamiltonian = assemble_hamiltonian(self.config.lattice_config())
        return hamiltonian, eigendecompose(hamiltonian)

    def _evolve_one(
        self,
        hamiltonian: HamiltonianMatrix,
        eig: EigenSystem,
        beta: Optional[Union[float, str]] = None,
    ) -> Tuple[ObservableSeries, WaveTrace]:
        half_sites = self.config.half_sites
        psi0 = initial_state(self.config.initial_state_spec(beta), half_sites)
        trace = propagate(eig, psi0, self.taus(), workers=self.workers)
        return compute_observables(trace, hamiltonian), trace

    @staticmethod
    def _summary(series: ObservableSeries, half_sites: int) -> Dict[str, object]:
        peak = segregation_peak(series, half_sites)
        return {
            "entropy_initial": float(series.entropy[0]),
            "entropy_final": float(series.entropy[-1]),
            "entropy_dips": len(find_entropy_dips(series)),
            "principal_dip_display_times": [
                dip.display_time for dip in principal_entropy_dips(series)
            ],
            "segregation_peak_display_time": None if peak is None else peak.display_time,
            "segregation_peak_gap": None if peak is None else peak.gap,
            "v_avg_min": float(np.min(series.v_avg)),
            "v_avg_min_display_time": float(series.display_time[int(np.argmin(series.v_avg))]),
            "tau_quarter_revival": revival_estimate(half_sites).tau_quarter,
        }

    @_logged_run("evolve")
    def run_evolve(self) -> RunManifest:
        """Assemble, diagonalize, propagate and write the observables of one run."""
        start = time.perf_counter()
        logger.info("Evolve run started", half_sites=self.config.half_sites, beta=self.config.beta)
        hamiltonian, eig = self.prepare_spectrum()
        series, trace = self._evolve_one(hamiltonian, eig)

        outputs: List[Path] = []
        if self.config.wants(Artifact.OBSERVABLES):
            outputs.append(write_observables_csv(series, self.output_dir / OBSERVABLES_FILE))
        if self.config.wants(Artifact.DENSITY):
            outputs.append(write_density_csv(trace, self.output_dir / DENSITY_FILE))
        if self.config.wants(Artifact.EIGENSYSTEM):
            self.output_dir.mkdir(parents=True, exist_ok=True)
            outputs.append(eig.dump(self.output_dir / EIGENSYSTEM_FILE))

        summary = self._summary(series, self.config.half_sites)
        summary["norm_defect"] = trace.norm_defect()
        elapsed_ms = (time.perf_counter() - start) * 1000
        log_stage_timing(logger, "evolve", elapsed_ms, outputs=len(outputs))
        return self._manifest("evolve", outputs, summary=summary)

    @_logged_run("sweep")
    def run_sweep(self, betas: Optional[List[Union[float, str]]] = None) -> RunManifest:
        """Evolve one initial state per beta on a shared eigensystem.

        Failed jobs are recorded in the manifest; the merged CSV keeps the others.
        """
        start = time.perf_counter()
        betas = list(betas if betas is not None else self.config.sweep_betas)
        if not betas:
            raise ValidationError("Sweep needs at least one beta value", field="sweep_betas")
        hamiltonian, eig = self.prepare_spectrum()
        labels = [self.config.initial_state_spec(beta).label for beta in betas]
        logger.info("Sweep started", betas=labels, workers=self.workers)

        def job(beta):
            try:
                series, _ = self._evolve_one(hamiltonian, eig, beta)
                return series, None
            except DemonDynamicsError as exc:
                logger.error(
                    "Sweep job failed",
                    beta=str(beta),
                    error_code=exc.error_code,
                    details=exc.details,
                )
                return None, exc.message

        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            results = list(pool.map(job, betas))

        entropies: Dict[str, np.ndarray] = {}
        failures: Dict[str, str] = {}
        summaries: Dict[str, object] = {}
        for label, (series, error) in zip(labels, results):
            if series is None:
                failures[label] = error
                continue
            entropies[label] = series.entropy
            summaries[label] = self._summary(series, self.config.half_sites)

        outputs: List[Path] = []
        if entropies:
            outputs.append(write_sweep_csv(self.taus(), entropies, self.output_dir / SWEEP_FILE))
        log_stage_timing(
            logger,
            "sweep",
            (time.perf_counter() - start) * 1000,
            jobs=len(betas),
            failed=len(failures),
        )
        return self._manifest(
            "sweep", outputs, partial=bool(failures), failures=failures, summary=summaries
        )

    @_logged_run("poles")
    def run_poles(self) -> RunManifest:
        """Scan the demon denominator and re-verify the written report.

        Raises:
            PoleVerificationError: If a reloaded root misses |D| < 1e-10; the report is removed
        """
        spec = self.config.container_spec()
        act = self.config.activation_spec()
        report = demon_pole_scan(
            self.config.pole_e_lo, self.config.pole_e_hi, spec, act, workers=self.workers
        )
        path = write_pole_report(report, self.output_dir / POLES_FILE)

        integrals = container_integrals(spec, act, IntegralMode.APPROX)
        reloaded = read_pole_report(path)
        residuals = [abs(evaluate_denominator(energy, integrals)) for energy in reloaded.energies]
        unverified = [e for e, r in zip(reloaded.energies, residuals) if r >= ROOT_TOLERANCE]
        if unverified:
            path.unlink()
            raise PoleVerificationError(
                f"{len(unverified)} pole roots failed re-verification", energies=unverified
            )
        logger.info("Pole scan written", path=str(path), roots=len(report.roots))
        return self._manifest(
            "poles",
            [path],
            summary={
                "roots": len(report.roots),
                "energies": report.energies,
                "flagged_extra_pole": report.flagged_extra_pole,
                "max_residual": max(residuals, default=0.0),
            },
        )

    @_logged_run("greens")
    def run_greens(
        self, kind: str, energy: float, x_prime: float, points: int = 101
    ) -> RunManifest:
        """Evaluate a perturbed container Green's function along x at fixed x'.

        Raises:
            ValidationError: On an unknown kind or a grid of fewer than two points
        """
        if kind not in GREEN_KINDS:
            raise ValidationError(f"kind must be one of {GREEN_KINDS}", field="kind", value=kind)
        if points < 2:
            raise ValidationError("Need at least two grid points", field="points", value=points)
        spec = self.config.container_spec()
        act = self.config.activation_spec()
        if kind == "demon":

            def green(x, xp, e):
                return g_p_box(x, xp, e, spec, act)

        else:

            def green(x, xp, e):
                return g_delta(x, xp, e, act.strength, lambda a, b, c: g0_box_closed(a, b, c, spec))

        half = 0.5 * spec.box_length
        rows = []
        for x in np.linspace(-half, half, points):
            split = antisymmetric_part(green, float(x), x_prime, energy)
            rows.append(
                {
                    "x": float(x),
                    "x_prime": x_prime,
                    "re_g": split.value.real,
                    "im_g": split.value.imag,
                    "re_antisym": split.antisym.real,
                    "im_antisym": split.antisym.imag,
                }
            )
        path = write_frame(pd.DataFrame(rows), self.output_dir / GREENS_FILE)
        return self._manifest(
            "greens",
            [path],
            summary={"kind": kind, "energy": energy, "x_prime": x_prime, "points": points},
        )
