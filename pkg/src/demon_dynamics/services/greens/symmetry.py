"""Exchange relations between advanced and retarded resolvents."""

import numpy as np
import structlog

from ...core.exceptions import ValidationError
from ...models.greens import AdjointSymmetryReport
from ..lattice import MatrixLike, as_matrix, direct_resolvent

logger = structlog.get_logger(__name__)

HERMITIAN_TOLERANCE = 1e-12


def adjoint_symmetry_check(
    hamiltonian: MatrixLike, energy: float, eps: float
) -> AdjointSymmetryReport:
    """Measure conj(G+(x', x)) - G-(x, x') and G+(x, x') - G+(x', x).

    The first vanishes for every Hermitian H; the second only when H is real.

    Raises:
        ValidationError: If H is not Hermitian, E is not real or eps <= 0
        ConditioningError: If H - E -+ i eps is numerically singular
    """
    matrix = as_matrix(hamiltonian)
    if eps <= 0:
        raise ValidationError("eps must be positive", field="eps", value=eps)
    if np.iscomplexobj(energy) and np.imag(energy) != 0:
        raise ValidationError("energy must be real", field="energy", value=energy)
    defect = float(np.max(np.abs(matrix - matrix.conj().T)))
    if defect > HERMITIAN_TOLERANCE * max(1.0, float(np.max(np.abs(matrix)))):
        raise ValidationError("Hamiltonian is not Hermitian", field="hamiltonian", value=defect)

    energy = float(np.real(energy))
    retarded = direct_resolvent(matrix, energy, eps, sign=1)
    advanced = direct_resolvent(matrix, energy, eps, sign=-1)
    exchange = retarded - retarded.T

    report = AdjointSymmetryReport(
        adjoint_defect=float(np.max(np.abs(retarded.conj().T - advanced))),
        symmetry_defect=float(np.max(np.abs(exchange))),
        symmetry_defect_frobenius=float(np.linalg.norm(exchange)),
        hamiltonian_is_real=bool(np.all(np.imag(matrix) == 0)),
    )
    logger.debug("Adjoint symmetry checked", energy=energy, **report.model_dump())
    return report
