"""Shared fixtures for the test suite."""

import math

import numpy as np
import pytest

from demon_dynamics.models import ActivationSpec, ContainerSpec, LatticeConfig
from demon_dynamics.services.lattice import assemble_hamiltonian, eigendecompose


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def small_lattice():
    return LatticeConfig(half_sites=16, upsilon0=0.1, kappa_r=math.pi / 4, kappa_d=math.pi / 2)


@pytest.fixture
def free_lattice():
    return LatticeConfig(half_sites=16, upsilon0=0.0)


@pytest.fixture
def demon_hamiltonian(small_lattice):
    return assemble_hamiltonian(small_lattice)


@pytest.fixture
def free_hamiltonian(free_lattice):
    return assemble_hamiltonian(free_lattice)


@pytest.fixture
def demon_eigensystem(demon_hamiltonian):
    return eigendecompose(demon_hamiltonian)


@pytest.fixture
def free_eigensystem(free_hamiltonian):
    return eigendecompose(free_hamiltonian)


@pytest.fixture
def box():
    return ContainerSpec(box_length=math.pi, hbar=1.0, series_terms=4096)


@pytest.fixture
def demon():
    """P_R L / 2 = 2.3 pi for L = pi."""
    return ActivationSpec(p_ref=4.6, strength=2.0)


@pytest.fixture
def no_demon():
    return ActivationSpec(p_ref=4.6, strength=0.0)
