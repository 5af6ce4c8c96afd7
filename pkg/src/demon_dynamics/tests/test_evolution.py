"""Tests for initial states and spectral propagation."""

import numpy as np
import pytest
from scipy.linalg import expm

from demon_dynamics.core.exceptions import NormDriftError, ValidationError
from demon_dynamics.models import InitialStateKind, InitialStateSpec, LatticeConfig, WallConvention
from demon_dynamics.services.diagnostics import revival_estimate
from demon_dynamics.services.evolution import initial_state, propagate, time_reversal_witness
from demon_dynamics.services.lattice import (
    assemble_hamiltonian,
    eigendecompose,
    free_box_basis,
    free_box_mode,
)

pytestmark = pytest.mark.unit


class TestInitialState:
    @pytest.mark.parametrize("convention", list(WallConvention))
    def test_boltzmann_is_normalized(self, convention):
        psi = initial_state(InitialStateSpec.boltzmann(0.01, convention), 16)
        assert psi.shape == (33,)
        assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-14)

    def test_boltzmann_weights_follow_lattice_modes(self):
        psi = initial_state(InitialStateSpec.boltzmann(0.05, WallConvention.LATTICE), 16)
        amplitudes = free_box_basis(16, WallConvention.LATTICE) @ psi
        q = np.arange(1, 34)
        ratios = amplitudes[1:5].real / amplitudes[0].real
        norms = np.linalg.norm(free_box_basis(16, WallConvention.LATTICE), axis=1)
        expected = np.exp(-0.05 * (q[1:5] ** 2 - 1.0)) * norms[1:5] / norms[0]
        np.testing.assert_allclose(ratios, expected, rtol=1e-10)

    def test_large_beta_collapses_to_ground_mode(self):
        psi = initial_state(InitialStateSpec.boltzmann(50.0, WallConvention.LATTICE), 16)
        ground = free_box_mode(1, 16, WallConvention.LATTICE)
        assert abs(np.vdot(ground, psi)) == pytest.approx(1.0, abs=1e-12)

    def test_uniform(self):
        psi = initial_state(InitialStateSpec.uniform(), 16)
        np.testing.assert_allclose(psi, np.full(33, 1 / np.sqrt(33)), rtol=1e-14)

    def test_explicit_is_normalized(self, rng):
        vector = rng.normal(size=33) + 1j * rng.normal(size=33)
        psi = initial_state(InitialStateSpec.explicit(vector), 16)
        np.testing.assert_allclose(psi, vector / np.linalg.norm(vector), rtol=1e-14)

    def test_explicit_wrong_size(self):
        with pytest.raises(ValidationError):
            initial_state(InitialStateSpec.explicit(np.ones(10)), 16)

    def test_explicit_zero_vector(self):
        with pytest.raises(ValidationError):
            initial_state(InitialStateSpec.explicit(np.zeros(33)), 16)

    def test_spec_requires_payload(self):
        with pytest.raises(ValueError):
            InitialStateSpec(kind=InitialStateKind.EXPLICIT, beta=None)

    def test_labels(self):
        assert InitialStateSpec.boltzmann(0.01).label == "0.01"
        assert InitialStateSpec.uniform().label == "uniform"


class TestPropagate:
    @pytest.fixture
    def psi0(self):
        return initial_state(InitialStateSpec.boltzmann(0.01, WallConvention.LATTICE), 16)

    def test_first_state_is_initial(self, demon_eigensystem, psi0):
        trace = propagate(demon_eigensystem, psi0, np.array([0.0, 1.0]))
        np.testing.assert_allclose(trace.states[0], psi0, atol=1e-13)

    def test_matches_matrix_exponential(self, demon_hamiltonian, demon_eigensystem, psi0):
        tau = 3.7
        trace = propagate(demon_eigensystem, psi0, np.array([tau]))
        expected = expm(-1j * tau * demon_hamiltonian.entries) @ psi0
        np.testing.assert_allclose(trace.states[0], expected, atol=1e-10)

    def test_norm_is_conserved(self, demon_eigensystem, psi0):
        trace = propagate(demon_eigensystem, psi0, np.linspace(0.0, 500.0, 301))
        assert trace.norm_defect() < 1e-12

    def test_energy_is_conserved(self, demon_hamiltonian, demon_eigensystem, psi0):
        trace = propagate(demon_eigensystem, psi0, np.linspace(0.0, 500.0, 51))
        states = trace.states
        energies = np.einsum("ti,ij,tj->t", states.conj(), demon_hamiltonian.entries, states)
        np.testing.assert_allclose(energies.imag, 0.0, atol=1e-12)
        np.testing.assert_allclose(energies.real, energies[0].real, atol=1e-10)

    def test_group_property(self, demon_eigensystem, psi0):
        first = propagate(demon_eigensystem, psi0, np.array([2.5])).states[0]
        restart = first / np.linalg.norm(first)
        chained = propagate(demon_eigensystem, restart, np.array([4.0])).states[0]
        direct = propagate(demon_eigensystem, psi0, np.array([6.5])).states[0]
        np.testing.assert_allclose(chained, direct, atol=1e-12)

    def test_chunking_and_workers_do_not_change_result(self, demon_eigensystem, psi0):
        taus = np.linspace(0.0, 100.0, 600)
        serial = propagate(demon_eigensystem, psi0, taus, workers=1)
        parallel = propagate(demon_eigensystem, psi0, taus, workers=3)
        np.testing.assert_allclose(serial.states, parallel.states, atol=1e-14)

    def test_free_eigenmode_is_stationary(self, free_eigensystem):
        mode = free_box_mode(3, 16, WallConvention.LATTICE)
        trace = propagate(free_eigensystem, mode, np.linspace(0.0, 50.0, 11))
        np.testing.assert_allclose(trace.density(), np.tile(mode**2, (11, 1)), atol=1e-12)

    def test_free_box_revives(self):
        config = LatticeConfig(half_sites=32, upsilon0=0.0)
        eig = eigendecompose(assemble_hamiltonian(config))
        psi0 = free_box_mode(1, 32) + free_box_mode(3, 32)
        psi0 = psi0 / np.linalg.norm(psi0)
        tau_full = revival_estimate(32, WallConvention.LATTICE).tau_full
        final = propagate(eig, psi0, np.array([tau_full])).states[0]
        assert abs(np.vdot(psi0, final)) > 0.99

    def test_rejects_unnormalized_state(self, demon_eigensystem, psi0):
        with pytest.raises(ValidationError):
            propagate(demon_eigensystem, 2 * psi0, np.array([0.0]))

    def test_rejects_dimension_mismatch(self, demon_eigensystem):
        with pytest.raises(ValidationError):
            propagate(demon_eigensystem, np.ones(5) / np.sqrt(5), np.array([0.0]))

    def test_rejects_empty_grid(self, demon_eigensystem, psi0):
        with pytest.raises(ValidationError):
            propagate(demon_eigensystem, psi0, np.array([]))

    def test_norm_drift_raises(self, mocker, demon_eigensystem, psi0):
        mocker.patch(
            "demon_dynamics.services.evolution._reconstruct",
            side_effect=lambda eig, coefficients, chunk: np.full((chunk.size, eig.dim), 0.2),
        )
        with pytest.raises(NormDriftError) as exc_info:
            propagate(demon_eigensystem, psi0, np.array([0.0, 1.0]))
        assert exc_info.value.norm_defect > 1e-10


class TestTimeReversal:
    def test_real_hamiltonian_is_reversible(self, free_eigensystem):
        psi0 = initial_state(InitialStateSpec.boltzmann(0.01), 16)
        assert time_reversal_witness(free_eigensystem, psi0, np.linspace(0.0, 40.0, 21)) < 1e-12

    def test_demon_breaks_reversal(self, demon_eigensystem):
        psi0 = initial_state(InitialStateSpec.boltzmann(0.01), 16)
        assert time_reversal_witness(demon_eigensystem, psi0, np.linspace(0.0, 40.0, 21)) > 1e-6
