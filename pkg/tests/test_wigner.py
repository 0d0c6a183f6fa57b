"""Clebsch-Gordan, rotations, and the spherical phase-space map.

The ladder-constructed CG table in oracles.py never touches the Racah sum
used by the package, so their agreement checks the closed form against the
defining recursion.
"""

import math

import numpy as np
import pytest

import catqed as cq
from oracles import cg_ladder, pearson, rotation_expm, wigner_d_expm

SQ2 = 1.0 / math.sqrt(2.0)
SQ3 = 1.0 / math.sqrt(3.0)
SQ6 = 1.0 / math.sqrt(6.0)


def half_range(tj_max):
    return [t / 2.0 for t in range(1, tj_max + 1)]


@pytest.mark.parametrize("args, expected", [
    ((0.5, 0.5, 0.5, -0.5, 0.0, 0.0), SQ2),     # singlet, Condon-Shortley +
    ((0.5, -0.5, 0.5, 0.5, 0.0, 0.0), -SQ2),
    ((0.5, 0.5, 0.5, -0.5, 1.0, 0.0), SQ2),
    ((0.5, 0.5, 0.5, 0.5, 1.0, 1.0), 1.0),      # stretched
    ((1.0, 1.0, 1.0, -1.0, 0.0, 0.0), SQ3),
    ((1.0, 0.0, 1.0, 0.0, 0.0, 0.0), -SQ3),
    ((1.0, 1.0, 1.0, -1.0, 2.0, 0.0), SQ6),
    ((1.0, 0.0, 1.0, 0.0, 2.0, 0.0), math.sqrt(2.0 / 3.0)),
    ((1.0, 1.0, 1.0, 0.0, 2.0, 1.0), SQ2),
    ((1.0, 1.0, 1.0, 0.0, 1.0, 1.0), SQ2),
])
def test_clebsch_gordan_frozen_table(args, expected):
    assert cq.clebsch_gordan(*args) == pytest.approx(expected, abs=1e-12)


def test_clebsch_gordan_matches_ladder_oracle():
    # every coefficient with j1, j2 <= 2 against the highest-weight descent
    for j1 in half_range(4):
        for j2 in half_range(4):
            js = np.arange(abs(j1 - j2), j1 + j2 + 0.5)
            for j in js:
                for m1 in np.arange(-j1, j1 + 0.5):
                    for m2 in np.arange(-j2, j2 + 0.5):
                        m = m1 + m2
                        if abs(m) > j:
                            continue
                        got = cq.clebsch_gordan(j1, m1, j2, m2, j, m)
                        ref = cg_ladder(j1, m1, j2, m2, j, m)
                        assert got == pytest.approx(ref, abs=1e-10), (
                            j1, m1, j2, m2, j, m)


def test_clebsch_gordan_large_spins_spot():
    for args in [(4.0, 2.0, 3.0, -1.0, 5.0, 1.0),
                 (3.5, 0.5, 2.5, 0.5, 4.0, 1.0),
                 (4.0, 4.0, 4.0, -4.0, 0.0, 0.0)]:
        assert cq.clebsch_gordan(*args) == pytest.approx(
            cg_ladder(*args), abs=1e-10)


def test_clebsch_gordan_selection_rules():
    assert cq.clebsch_gordan(1.0, 1.0, 1.0, 1.0, 2.0, 1.0) == 0.0  # m1+m2 != m
    assert cq.clebsch_gordan(1.0, 0.0, 1.0, 0.0, 3.0, 0.0) == 0.0  # j too big
    assert cq.clebsch_gordan(0.5, 0.5, 0.5, 0.5, 0.0, 1.0) == 0.0


def test_clebsch_gordan_rejects_bad_input():
    with pytest.raises(cq.CatqedError):
        cq.clebsch_gordan(0.3, 0.3, 0.5, 0.5, 1.0, 0.8)
    with pytest.raises(cq.CatqedError):
        cq.clebsch_gordan(-1.0, 0.0, 1.0, 0.0, 1.0, 0.0)


def test_kernel_weights_spin_half_frozen():
    w = cq.kernel_weights(1)
    expected = sorted([(1 - math.sqrt(3.0)) / 2.0, (1 + math.sqrt(3.0)) / 2.0])
    assert sorted(w) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("n_qubits", [1, 2, 4, 9])
def test_kernel_weights_trace_one(n_qubits):
    assert cq.kernel_weights(n_qubits).sum() == pytest.approx(1.0, abs=1e-10)


def test_rotation_matrix_unitary_large_spin():
    r = cq.rotation_matrix(32, 0.7, 1.3)
    eye = r.conj().T @ r
    assert np.abs(eye - np.eye(33)).max() < 1e-12


def test_rotation_matrix_matches_expm_oracle():
    for n, th, ph in [(1, 0.4, 0.0), (5, 0.7, 1.3), (8, 2.9, 5.0)]:
        got = cq.rotation_matrix(n, th, ph)
        ref = rotation_expm(n, th, ph)
        assert np.abs(got - ref).max() < 1e-12


def test_rotation_composition():
    d1 = cq.rotation_matrix(6, 0.5, 0.0)
    d2 = cq.rotation_matrix(6, 1.1, 0.0)
    d12 = cq.rotation_matrix(6, 1.6, 0.0)
    assert np.abs(d1 @ d2 - d12).max() < 1e-12


def all_down_density(n_qubits):
    dim = n_qubits + 1
    rho = np.zeros((dim, dim), dtype=complex)
    rho[0, 0] = 1.0
    return cq.ElectronDensityMatrix(rho, cq.DickeSpace(n_qubits))


def test_wigner_identity_is_flat():
    n = 4
    rho = cq.ElectronDensityMatrix(np.eye(5) / 5.0, cq.DickeSpace(n))
    grid = cq.wigner_function(rho, n_theta=61, n_phi=60)
    assert np.abs(grid.values - 1.0 / 5.0).max() < 1e-12


def test_wigner_all_down_spin_half_closed_form():
    # rho = |1/2, -1/2><1/2, -1/2|: W(theta) = (1 - sqrt(3) cos(theta)) / 2
    grid = cq.wigner_function(all_down_density(1), n_theta=91, n_phi=16)
    ref = (1.0 - math.sqrt(3.0) * np.cos(grid.theta)) / 2.0
    assert np.abs(grid.values - ref[:, None]).max() < 1e-12


def test_wigner_all_down_peaks_south():
    grid = cq.wigner_function(all_down_density(6), n_theta=121, n_phi=24)
    profile = grid.values.mean(axis=1)
    assert np.argmax(profile) == 120  # theta = pi
    assert profile[0] < profile[-1]


@pytest.mark.parametrize("n_qubits", [1, 3, 8])
def test_wigner_integrates_to_one(n_qubits, random_density):
    rho = cq.ElectronDensityMatrix(random_density(n_qubits + 1),
                                   cq.DickeSpace(n_qubits))
    # trapezoid in theta converges like h^2, so the 1e-6 target needs a
    # fine polar grid; phi is a rectangle rule on a trig polynomial and
    # is exact for any n_phi > 2J
    grid = cq.wigner_function(rho, n_theta=2001, n_phi=72)
    assert grid.integrate() == pytest.approx(1.0, abs=1e-6)


def test_wigner_azimuthal_covariance():
    # rotating the state about z shifts W along phi by the same angle
    n = 4
    n_phi = 72
    shift_steps = 6
    phi0 = 2.0 * math.pi * shift_steps / n_phi
    psi = np.zeros(5, dtype=complex)
    psi[0] = math.sqrt(0.5)
    psi[4] = math.sqrt(0.5)  # GHZ, strong phi dependence
    rho = np.outer(psi, psi.conj())
    r = cq.rotation_matrix(n, 0.0, phi0)
    rho_rot = r @ rho @ r.conj().T
    base = cq.wigner_function(
        cq.ElectronDensityMatrix(rho, cq.DickeSpace(n)), n_theta=61, n_phi=n_phi)
    rot = cq.wigner_function(
        cq.ElectronDensityMatrix(rho_rot, cq.DickeSpace(n)), n_theta=61,
        n_phi=n_phi)
    rolled = np.roll(base.values, shift_steps, axis=1)
    assert np.abs(rot.values - rolled).max() < 1e-10


def test_wigner_ghz_equatorial_fringes():
    n = 4
    psi = np.zeros(5, dtype=complex)
    psi[0] = psi[4] = math.sqrt(0.5)
    rho = cq.ElectronDensityMatrix(np.outer(psi, psi.conj()), cq.DickeSpace(n))
    grid = cq.wigner_function(rho, n_theta=91, n_phi=360)
    equator = grid.values[45, :]  # theta = pi/2
    signs = np.sign(equator)
    flips = int(np.sum(signs[1:] * signs[:-1] < 0))
    assert flips == 2 * n  # cos(N phi) oscillation
    assert equator.min() < -0.01  # genuine negativity


def test_wigner_grid_to_file(tmp_path):
    grid = cq.wigner_function(all_down_density(2), n_theta=5, n_phi=4)
    path = tmp_path / "w.dat"
    grid.to_file(str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "# J=1 n_theta=5 n_phi=4"
    assert len(lines) == 1 + 5 * 4
    data = np.loadtxt(str(path))
    assert data.shape == (20, 3)
    assert data[:, 2].reshape(5, 4) == pytest.approx(grid.values, abs=1e-15)
