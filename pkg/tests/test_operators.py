"""Hamiltonian action and observable expectations against dense kron oracles."""

import numpy as np
import pytest

import catqed as cq
from oracles import dense_boson, dense_hamiltonian, dense_spin


def random_state(rng, n_qubits, n_max):
    shape = (n_qubits + 1, n_max + 1)
    c = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    c /= np.linalg.norm(c)
    return cq.CompositeState(c, cq.DickeSpace(n_qubits), cq.FockSpace(n_max))


def test_spin_matrices_match_dense_loops():
    jx, jy, jz = cq.spin_matrices(5)
    ox, oy, oz, _, _ = dense_spin(5)
    assert np.abs(jx - ox).max() < 1e-14
    assert np.abs(jy - oy).max() < 1e-14
    assert np.abs(jz - oz).max() < 1e-14


def test_spin_commutator():
    jx, jy, jz = cq.spin_matrices(7)
    comm = jx @ jy - jy @ jx
    assert np.abs(comm - 1j * jz).max() < 1e-13


@pytest.mark.parametrize("params", [
    cq.ModelParams(n_qubits=3, gamma=0.2),
    cq.ModelParams(n_qubits=3, gamma=0.2, delta=1.3, omega=0.8),
    cq.ModelParams(n_qubits=2, gamma=0.15, mu=0.7, rwa=False),
    cq.ModelParams(n_qubits=1, gamma=0.05, delta=0.9, omega=1.1, rwa=False),
])
def test_apply_hamiltonian_matches_dense(params, rng):
    n_max = 7
    state = random_state(rng, params.n_qubits, n_max)
    out = cq.apply_hamiltonian(state, params)
    h = dense_hamiltonian(params, n_max)
    ref = (h @ state.amplitudes.ravel()).reshape(state.amplitudes.shape)
    assert np.abs(out - ref).max() < 1e-13


def test_hamiltonian_action_scale(rng):
    params = cq.ModelParams(n_qubits=2, gamma=0.1)
    state = random_state(rng, 2, 5)
    action = cq.HamiltonianAction(params, state.dicke, state.fock, scale=-0.5j)
    out = np.empty_like(state.amplitudes)
    action.apply(state.amplitudes, out)
    ref = -0.5j * cq.apply_hamiltonian(state, params)
    assert np.abs(out - ref).max() < 1e-14


def test_hermiticity_of_action(rng):
    # <u|H v> == <H u|v> for both models
    for rwa in (True, False):
        params = cq.ModelParams(n_qubits=3, gamma=0.3, rwa=rwa)
        u = random_state(rng, 3, 6)
        v = random_state(rng, 3, 6)
        hu = cq.apply_hamiltonian(u, params)
        hv = cq.apply_hamiltonian(v, params)
        lhs = np.vdot(u.amplitudes, hv)
        rhs = np.vdot(hu, v.amplitudes)
        assert abs(lhs - rhs) < 1e-13


def test_expectations_match_dense(rng):
    params = cq.ModelParams(n_qubits=3, gamma=0.2, rwa=False)
    n_max = 6
    state = random_state(rng, 3, n_max)
    jx, jy, jz, _, _ = dense_spin(3)
    _, _, nph = dense_boson(n_max)
    ie = np.eye(4)
    ip = np.eye(n_max + 1)
    psi = state.amplitudes.ravel()

    def dense_expect(op):
        return float(np.vdot(psi, op @ psi).real)

    assert cq.expectation(state, "jx") == pytest.approx(
        dense_expect(np.kron(jx, ip)), abs=1e-12)
    assert cq.expectation(state, "jy") == pytest.approx(
        dense_expect(np.kron(jy, ip)), abs=1e-12)
    assert cq.expectation(state, "jz") == pytest.approx(
        dense_expect(np.kron(jz, ip)), abs=1e-12)
    assert cq.expectation(state, "photon_number") == pytest.approx(
        dense_expect(np.kron(ie, nph)), abs=1e-12)
    assert cq.expectation(state, "energy", params) == pytest.approx(
        dense_expect(dense_hamiltonian(params, n_max)), abs=1e-12)
    # excitations counted from the ground state: Jz + N/2 + n
    assert cq.expectation(state, "excitation_number", params) == pytest.approx(
        dense_expect(np.kron(jz, ip) + np.kron(ie, nph)) + 1.5, abs=1e-12)


def test_expectation_rejects_unknown_name(rng):
    state = random_state(rng, 2, 4)
    with pytest.raises(cq.ConfigError):
        cq.expectation(state, "entropy")


def test_energy_requires_params(rng):
    state = random_state(rng, 2, 4)
    with pytest.raises(cq.ConfigError):
        cq.expectation(state, "energy")


def test_field_expectation_matches_dense(rng):
    state = random_state(rng, 2, 6)
    a, _, _ = dense_boson(6)
    ref = np.vdot(state.amplitudes.ravel(),
                  np.kron(np.eye(3), a) @ state.amplitudes.ravel())
    assert abs(cq.field_expectation(state) - ref) < 1e-13


def test_model_params_validation():
    with pytest.raises(cq.ConfigError):
        cq.ModelParams(n_qubits=0, gamma=0.1)
    with pytest.raises(cq.ConfigError):
        cq.ModelParams(n_qubits=2, gamma=-0.1)
    with pytest.raises(cq.ConfigError):
        cq.ModelParams(n_qubits=2, gamma=0.1, omega=0.0)


def test_observables_tuple_frozen():
    assert set(cq.OBSERVABLES) == {
        "photon_number", "jz", "jx", "jy", "energy", "excitation_number"}
