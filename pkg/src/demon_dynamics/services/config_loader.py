"""Flat ``key = value`` run files and recorded run manifests."""

import json
import math
import re
from pathlib import Path
from typing import Any, Dict, Iterable, Mapping, Optional, Tuple, Union

import pydantic
import structlog

from ..core.exceptions import ConfigurationError
from ..models.run import UNIFORM, RunConfig, RunManifest
from .serialization import config_digest

logger = structlog.get_logger(__name__)

LIST_KEYS = {"artifacts", "sweep_betas"}
TEXT_KEYS = {"output_dir"}
BETA_KEYS = {"beta", "sweep_betas"}
MANIFEST_SUFFIX = ".json"

_NUMBER = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_PI_FORM = re.compile(rf"^(?:(?P<factor>{_NUMBER})\s*\*\s*)?pi(?:\s*/\s*(?P<divisor>{_NUMBER}))?$")
_INTEGER = re.compile(r"^[+-]?\d+$")


def parse_number(text: str) -> Union[int, float]:
    """Parse a literal, ``inf``, ``pi``, ``k*pi``, ``pi/k`` or ``k*pi/m``.

    Raises:
        ValueError: If the text is none of these
    """
    token = text.strip().lower()
    if _INTEGER.match(token):
        return int(token)
    match = _PI_FORM.match(token)
    if match:
        value = math.pi
        if match.group("factor"):
            value *= float(match.group("factor"))
        if match.group("divisor"):
            value /= float(match.group("divisor"))
        return value
    return float(token)


def _convert(key: str, raw: str) -> Any:
    if key in TEXT_KEYS:
        return raw
    if key in LIST_KEYS:
        items = [item.strip() for item in raw.split(",") if item.strip()]
        if key in BETA_KEYS:
            return [item if item.lower() == UNIFORM else parse_number(item) for item in items]
        return items
    if key in BETA_KEYS and raw.lower() == UNIFORM:
        return UNIFORM
    return parse_number(raw)


def parse_run_lines(lines: Iterable[str]) -> Tuple[Dict[str, Any], Dict[str, int]]:
    """Parse run-file lines into typed values and the line each key came from.

    Raises:
        ConfigurationError: On malformed lines, unknown or duplicate keys and bad values
    """
    values: Dict[str, Any] = {}
    origin: Dict[str, int] = {}
    known = set(RunConfig.model_fields)
    for number, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {number}: expected 'key = value'", line=number)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in known:
            raise ConfigurationError(
                f"line {number}: unknown key '{key}'", config_key=key, line=number
            )
        if key in values:
            raise ConfigurationError(
                f"line {number}: duplicate key '{key}' (first set on line {origin[key]})",
                config_key=key,
                line=number,
            )
        try:
            values[key] = _convert(key, value)
        except ValueError as exc:
            raise ConfigurationError(
                f"line {number}: invalid value for '{key}': {value!r}", config_key=key, line=number
            ) from exc
        origin[key] = number
    return values, origin


def build_run_config(
    values: Mapping[str, Any],
    origin: Optional[Mapping[str, int]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> RunConfig:
    """Merge file values with overrides and validate.

    Raises:
        ConfigurationError: With the offending key and, for file keys, its line
    """
    origin = origin or {}
    merged = dict(values)
    merged.update({key: value for key, value in (overrides or {}).items() if value is not None})
    try:
        return RunConfig(**merged)
    except pydantic.ValidationError as exc:
        first = exc.errors()[0]
        key = str(first["loc"][0]) if first["loc"] else None
        line = origin.get(key) if key else None
        where = f"line {line}: " if line else ""
        raise ConfigurationError(
            f"{where}invalid value for '{key}': {first['msg']}", config_key=key, line=line
        ) from exc


def load_manifest_config(
    path: Union[str, Path], overrides: Optional[Mapping[str, Any]] = None
) -> RunConfig:
    """Rebuild the configuration recorded in a run manifest, then apply overrides.

    Raises:
        ConfigurationError: If the manifest is unreadable, malformed or its digest disagrees
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"Cannot read manifest {path}: {exc}") from exc
    try:
        manifest = RunManifest.model_validate(json.loads(text))
    except (ValueError, pydantic.ValidationError) as exc:
        raise ConfigurationError(f"{path} is not a run manifest: {exc}") from exc

    recorded = build_run_config(manifest.config)
    if config_digest(recorded) != manifest.config_sha256:
        raise ConfigurationError(
            f"Manifest {path} config does not match its sha256", config_key="config_sha256"
        )
    logger.debug("Manifest config loaded", path=str(path), command=manifest.command)
    return build_run_config(manifest.config, overrides=overrides)


def load_run_config(
    path: Optional[Union[str, Path]] = None, overrides: Optional[Mapping[str, Any]] = None
) -> RunConfig:
    """Read a run file or a ``.json`` run manifest (optional) and apply CLI overrides on top.

    Raises:
        ConfigurationError: If the file is unreadable or invalid
    """
    if path is not None and Path(path).suffix.lower() == MANIFEST_SUFFIX:
        return load_manifest_config(path, overrides)
    values: Dict[str, Any] = {}
    origin: Dict[str, int] = {}
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigurationError(f"Cannot read run file {path}: {exc}") from exc
        values, origin = parse_run_lines(text.splitlines())
        logger.debug("Run file parsed", path=str(path), keys=sorted(values))
    return build_run_config(values, origin, overrides)
