"""Custom exceptions for Demon Dynamics."""

from typing import Any, Dict, Optional


class DemonDynamicsError(Exception):
    """Base exception for all package errors."""

    def __init__(
        self,
        message: str,
        error_code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message)
        self.message = message
        self.error_code = error_code
        self.details = details or {}


class ConfigurationError(DemonDynamicsError):
    """Exception raised for run-configuration errors."""

    def __init__(self, message: str, config_key: Optional[str] = None, line: Optional[int] = None):
        super().__init__(
            message,
            error_code="CONFIGURATION_ERROR",
            details={"config_key": config_key, "line": line},
        )
        self.config_key = config_key
        self.line = line


class ValidationError(DemonDynamicsError):
    """Exception raised when an input violates a precondition."""

    def __init__(self, message: str, field: Optional[str] = None, value: Any = None):
        super().__init__(
            message,
            error_code="VALIDATION_ERROR",
            details={"field": field, "value": value},
        )
        self.field = field
        self.value = value


class DomainError(ValidationError):
    """Exception raised when a function is evaluated outside its domain."""

    def __init__(self, message: str, field: Optional[str] = None, value: Any = None):
        super().__init__(message, field=field, value=value)
        self.error_code = "DOMAIN_ERROR"


class DegenerateBandError(ValidationError):
    """Exception raised when P_R L / 2 sits on a multiple of pi."""

    def __init__(self, message: str, band_a: Optional[float] = None):
        super().__init__(message, field="band_a", value=band_a)
        self.error_code = "DEGENERATE_BAND_ERROR"
        self.band_a = band_a


class NumericalContractError(DemonDynamicsError):
    """Base exception for violated numerical contracts."""


class BoxPoleError(NumericalContractError):
    """Exception raised when E hits an eigenenergy of the free container."""

    def __init__(self, message: str, energy: Optional[float] = None, mode: Optional[int] = None):
        super().__init__(
            message,
            error_code="BOX_POLE_ERROR",
            details={"energy": energy, "mode": mode},
        )
        self.energy = energy
        self.mode = mode


class ResonancePoleError(NumericalContractError):
    """Exception raised when a perturbed Green's function denominator vanishes."""

    def __init__(
        self,
        message: str,
        energy: Any = None,
        denominator: Any = None,
        kind: Optional[str] = None,
    ):
        super().__init__(
            message,
            error_code="RESONANCE_POLE_ERROR",
            details={"energy": str(energy), "denominator": str(denominator), "kind": kind},
        )
        self.energy = energy
        self.denominator = denominator
        self.kind = kind


class ConditioningError(NumericalContractError):
    """Exception raised when a linear system is numerically singular."""

    def __init__(self, message: str, condition: Optional[float] = None):
        super().__init__(
            message,
            error_code="CONDITIONING_ERROR",
            details={"condition": condition},
        )
        self.condition = condition


class EigenSolverError(NumericalContractError):
    """Exception raised when an eigendecomposition fails its residual contract."""

    def __init__(
        self,
        message: str,
        residual: Optional[float] = None,
        orthogonality: Optional[float] = None,
    ):
        super().__init__(
            message,
            error_code="EIGEN_SOLVER_ERROR",
            details={"residual": residual, "orthogonality": orthogonality},
        )
        self.residual = residual
        self.orthogonality = orthogonality


class SideEnergyError(NumericalContractError):
    """Exception raised when a lateral energy is requested for an empty side."""

    def __init__(
        self, message: str, side: Optional[str] = None, probability: Optional[float] = None
    ):
        super().__init__(
            message,
            error_code="SIDE_ENERGY_ERROR",
            details={"side": side, "probability": probability},
        )
        self.side = side
        self.probability = probability


class UnderdeterminedFitError(NumericalContractError):
    """Exception raised when too few populated modes remain for a fit."""

    def __init__(self, message: str, usable_modes: Optional[int] = None):
        super().__init__(
            message,
            error_code="UNDERDETERMINED_FIT_ERROR",
            details={"usable_modes": usable_modes},
        )
        self.usable_modes = usable_modes


class PoleScanError(NumericalContractError):
    """Exception raised when the pole denominator cannot be evaluated."""

    def __init__(self, message: str, interval: Optional[tuple] = None):
        super().__init__(
            message,
            error_code="POLE_SCAN_ERROR",
            details={"interval": interval},
        )
        self.interval = interval


class NormDriftError(NumericalContractError):
    """Exception raised when a propagated state leaves the unit sphere."""

    def __init__(self, message: str, norm_defect: Optional[float] = None):
        super().__init__(
            message,
            error_code="NORM_DRIFT_ERROR",
            details={"norm_defect": norm_defect},
        )
        self.norm_defect = norm_defect


class PoleVerificationError(NumericalContractError):
    """Exception raised when reported poles fail the denominator check on reload."""

    def __init__(self, message: str, energies: Optional[list] = None):
        super().__init__(
            message,
            error_code="POLE_VERIFICATION_ERROR",
            details={"energies": energies},
        )
        self.energies = energies
