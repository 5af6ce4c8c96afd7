"""Writers for run outputs: CSV tables, pole reports and manifests."""

import hashlib
import json
from pathlib import Path
from typing import Dict, Union

import numpy as np
import pandas as pd

from ..models.diagnostics import ObservableSeries
from ..models.evolution import WaveTrace
from ..models.greens import PoleReport
from ..models.run import RunConfig, RunManifest

PathLike = Union[str, Path]

FLOAT_FORMAT = "%.17g"


def write_frame(frame: pd.DataFrame, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path


def observables_frame(series: ObservableSeries) -> pd.DataFrame:
    frame = pd.DataFrame(series.columns())
    frame["display_time"] = series.display_time
    return frame


def write_observables_csv(series: ObservableSeries, path: PathLike) -> Path:
    return write_frame(observables_frame(series), path)


def write_density_csv(trace: WaveTrace, path: PathLike) -> Path:
    """|Psi(n, tau)|^2 with one row per tau and one column per site."""
    sites = np.arange(-trace.half_sites, trace.half_sites + 1)
    frame = pd.DataFrame(trace.density(), columns=[f"n{site}" for site in sites])
    frame.insert(0, "tau", trace.taus)
    return write_frame(frame, path)


def write_sweep_csv(taus: np.ndarray, entropies: Dict[str, np.ndarray], path: PathLike) -> Path:
    """Entropy columns keyed by beta label, in the given order."""
    frame = pd.DataFrame({"tau": taus})
    for label, values in entropies.items():
        frame[f"entropy_beta_{label}"] = values
    return write_frame(frame, path)


def write_pole_report(report: PoleReport, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(report.to_lines()) + "\n", encoding="utf-8", newline="\n")
    return path


def read_pole_report(path: PathLike) -> PoleReport:
    return PoleReport.from_lines(Path(path).read_text(encoding="utf-8").splitlines())


def config_payload(config: RunConfig) -> Dict[str, object]:
    return json.loads(config.model_dump_json())


def config_digest(config: RunConfig) -> str:
    """sha256 of the canonical JSON form of a run configuration."""
    canonical = json.dumps(config_payload(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def write_manifest(manifest: RunManifest, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8", newline="\n")
    return path
