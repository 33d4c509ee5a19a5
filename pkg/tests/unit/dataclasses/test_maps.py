import numpy as np
import pytest

from spingas.dataclasses.density_matrix import DensityMatrix
from spingas.dataclasses.maps import (
    PauliDiagonalMap,
    SingleQubitMapCoeffs,
    bell_pauli_vectors,
    mean_single_qubit_map,
)
from spingas.utils import DimensionError
from tests.unit.conftest import random_density_matrix


def test_coefficients_from_r_gamma():
    coeffs = SingleQubitMapCoeffs.from_r_gamma(0.5, np.pi / 2)
    assert coeffs.lambda00 == pytest.approx(0.5)
    assert coeffs.lambda11 == pytest.approx(0.5)
    assert coeffs.lambda01 == pytest.approx(0.25j)


def test_identity_map(rng):
    identity = SingleQubitMapCoeffs.from_r_gamma(1.0, 0.0)
    rho = random_density_matrix(1, rng)
    assert identity.apply(rho).allclose(rho)


def test_single_qubit_apply_multiplies_coherence(rng):
    r, g = 0.7, 0.4
    coeffs = SingleQubitMapCoeffs.from_r_gamma(r, g)
    rho = random_density_matrix(1, rng)
    out = coeffs.apply(rho)
    assert out.entries[0, 0] == pytest.approx(rho.entries[0, 0])
    assert out.entries[0, 1] == pytest.approx(r * np.exp(-1j * g) * rho.entries[0, 1])
    assert np.allclose(
        PauliDiagonalMap.from_single_qubit(coeffs).apply(rho).entries, out.entries
    )


def test_apply_needs_one_qubit():
    coeffs = SingleQubitMapCoeffs.from_r_gamma(1.0, 0.0)
    with pytest.raises(DimensionError):
        coeffs.apply(DensityMatrix.maximally_mixed(2))


def test_choi_matrix_is_positive():
    choi = SingleQubitMapCoeffs.from_r_gamma(0.3, 1.1).choi_matrix()
    assert np.allclose(choi, choi.conj().T)
    assert np.trace(choi).real == pytest.approx(1.0)
    assert np.linalg.eigvalsh(choi)[0] > -1e-12


def test_mean_single_qubit_map():
    maps = [
        SingleQubitMapCoeffs.from_r_gamma(1.0, 0.5),
        SingleQubitMapCoeffs.from_r_gamma(1.0, -0.5),
    ]
    mean = mean_single_qubit_map(maps)
    assert mean.r == pytest.approx(np.cos(0.5))
    assert mean.gamma_phase == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ValueError):
        mean_single_qubit_map([])


def test_multipliers_from_coefficients():
    # lambda = 1/2 (I . I + Z . Z) kills every coherence of one qubit
    dephasing = PauliDiagonalMap(1, {((0,), (0,)): 0.5, ((3,), (3,)): 0.5})
    assert np.allclose(dephasing.multipliers, np.eye(2))
    two = PauliDiagonalMap(2, {((0, 0), (0, 0)): 1.0})
    assert np.allclose(two.multipliers, np.ones((4, 4)))


def test_mask_round_trip():
    assert PauliDiagonalMap.mask_of((3, 0, 3)) == 0b101
    assert PauliDiagonalMap.index_of(0b101, 3) == (3, 0, 3)


def test_rejects_indices_outside_sector():
    with pytest.raises(ValueError):
        PauliDiagonalMap(1, {((1,), (0,)): 1.0})
    with pytest.raises(DimensionError):
        PauliDiagonalMap(2, {((0,), (0,)): 1.0})


def test_to_records_is_sparse_and_sorted():
    m = PauliDiagonalMap(1, {((3,), (3,)): 0.25, ((0,), (0,)): 0.75, ((0,), (3,)): 0})
    assert m.to_records(atol=1e-15) == [((0,), (0,), 0.75), ((3,), (3,), 0.25)]


def test_bell_pauli_vectors_are_orthonormal():
    vectors = bell_pauli_vectors(2)
    basis = np.stack(list(vectors.values()), axis=1)
    assert basis.shape == (16, 16)
    assert np.allclose(basis.conj().T @ basis, np.eye(16))
    assert list(bell_pauli_vectors(1, sector=(0, 3))) == [(0,), (3,)]
