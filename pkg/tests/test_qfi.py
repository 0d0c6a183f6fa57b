"""Fisher-information values against closed forms and a brute-force oracle."""

import numpy as np
import pytest

import catqed as cq
from oracles import dense_spin, qfi_brute, rotation_expm


def dicke_vector(n_qubits, m):
    v = np.zeros(n_qubits + 1, dtype=complex)
    v[int(m + n_qubits / 2)] = 1.0
    return v


def density(matrix, n_qubits):
    return cq.ElectronDensityMatrix(matrix, cq.DickeSpace(n_qubits))


@pytest.mark.parametrize("n_qubits", [2, 5, 8])
def test_dicke_state_closed_form(n_qubits):
    # F(|J, m>) = 2 (J(J+1) - m^2): variance of Jx/Jy in a ladder state
    j = n_qubits / 2.0
    for k in range(n_qubits + 1):
        m = -j + k
        res = cq.qfi_pure(dicke_vector(n_qubits, m), n_qubits)
        assert res.value == pytest.approx(2.0 * (j * (j + 1) - m * m), abs=1e-9)


def test_ghz_reaches_n_squared():
    n = 4
    psi = (dicke_vector(n, -2) + dicke_vector(n, 2)) / np.sqrt(2)
    res = cq.qfi_pure(psi, n)
    assert res.value == pytest.approx(16.0, abs=1e-9)
    # optimal direction is the z axis
    assert abs(res.direction[2]) == pytest.approx(1.0, abs=1e-9)


def test_product_state_density_is_one():
    for n in (3, 6):
        res = cq.qfi_pure(dicke_vector(n, -n / 2), n)
        assert res.value / n == pytest.approx(1.0, abs=1e-12)


def test_pure_vs_mixed_agree(rng):
    for n in (2, 4, 7):
        psi = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
        psi /= np.linalg.norm(psi)
        pure = cq.qfi_pure(psi, n)
        mixed = cq.qfi_mixed(density(np.outer(psi, psi.conj()), n))
        assert mixed.value == pytest.approx(pure.value, abs=1e-8)


def test_mixed_matches_brute_force_oracle(random_density):
    for n in (2, 4, 6):
        rho = random_density(n + 1)
        got = cq.qfi_mixed(density(rho, n)).value
        jx, jy, jz, _, _ = dense_spin(n)
        ref = qfi_brute(rho, (jx, jy, jz))
        assert got == pytest.approx(ref, abs=1e-9)


def test_rank_deficient_density(random_density):
    # low-rank mixtures exercise the lambda_i + lambda_j ~ 0 pairs
    n = 6
    rho = random_density(n + 1, rank=2)
    got = cq.qfi_mixed(density(rho, n)).value
    jx, jy, jz, _, _ = dense_spin(n)
    assert got == pytest.approx(qfi_brute(rho, (jx, jy, jz)), abs=1e-9)


def test_pair_floor_insensitivity(random_density):
    n = 5
    rho = random_density(n + 1, rank=3)
    values = [cq.qfi_mixed(density(rho, n), pair_floor=f).value
              for f in (1e-15, 1e-12, 1e-9)]
    assert max(values) - min(values) < 1e-8


def test_direction_is_unit_and_consistent(random_density):
    n = 4
    rho = random_density(n + 1)
    res = cq.qfi_mixed(density(rho, n))
    assert np.linalg.norm(res.direction) == pytest.approx(1.0, abs=1e-12)
    # the quadratic form along the optimal direction equals the value
    quad = res.direction @ res.matrix @ res.direction
    assert quad == pytest.approx(res.value, rel=1e-10)


def test_rotation_invariance(rng):
    # conjugating by a collective rotation permutes the generator set, so
    # the optimized value is unchanged
    n = 5
    psi = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
    psi /= np.linalg.norm(psi)
    base = cq.qfi_pure(psi, n).value
    r = rotation_expm(n, 0.9, 2.1)
    rotated = cq.qfi_pure(r @ psi, n).value
    assert rotated == pytest.approx(base, rel=1e-10)


def test_mixing_never_increases_qfi(random_density):
    # convexity spot check: mixture value <= weighted sum of components
    n = 4
    rho1 = random_density(n + 1)
    rho2 = random_density(n + 1)
    mix = 0.5 * rho1 + 0.5 * rho2
    f_mix = cq.qfi_mixed(density(mix, n)).value
    bound = 0.5 * (cq.qfi_mixed(density(rho1, n)).value
                   + cq.qfi_mixed(density(rho2, n)).value)
    assert f_mix <= bound + 1e-9


def test_entanglement_depth_bound():
    assert cq.entanglement_depth_bound(16.0, 4) == 4     # GHZ: full depth
    assert cq.entanglement_depth_bound(4.0, 4) == 1      # product level
    assert cq.entanglement_depth_bound(3.73 * 8, 8) == 4  # F/N = 3.73 -> depth 4
    assert cq.entanglement_depth_bound(4.29 * 8, 8) == 5


def test_maximally_mixed_has_zero_qfi():
    n = 3
    rho = np.eye(n + 1) / (n + 1)
    assert cq.qfi_mixed(density(rho, n)).value == pytest.approx(0.0, abs=1e-10)
