"""Numerical services and run orchestration.

This module contains:
- Potential and activation kernels (potential.py)
- Lattice Hamiltonian, spectrum and resolvent (lattice.py)
- Container Green's functions, pole scan and symmetry check (greens/)
- Initial states and propagation (evolution.py)
- Observables and entropy bookkeeping (diagnostics.py)
- Run files, output writers and orchestration (config_loader.py, serialization.py,
  orchestration_service.py)

Naming convention:
- *_service.py: Run-level workflow layer
- everything else: pure numerical functions over the models package
"""

from .config_loader import load_run_config
from .orchestration_service import RunOrchestrator

__all__ = ["RunOrchestrator", "load_run_config"]
