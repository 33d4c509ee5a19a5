from functools import reduce
from typing import Sequence

import numpy as np
import pytest

from spingas.dataclasses.density_matrix import DensityMatrix
from spingas.dataclasses.gas import GasConfig
from spingas.dataclasses.maps import PAULIS

PAULI_NAMES = {"I": 0, "X": 1, "Y": 2, "Z": 3}


def pauli_string(word: str) -> np.ndarray:
    """Tensor product of Paulis named by a word such as "XZI"."""
    return reduce(np.kron, [PAULIS[PAULI_NAMES[c]] for c in word])


def expectation(rho: DensityMatrix, operator: np.ndarray) -> float:
    return float(np.real(np.trace(rho.entries @ operator)))


def random_density_matrix(n_qubits: int, rng: np.random.Generator) -> DensityMatrix:
    dim = 2**n_qubits
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return DensityMatrix(rho / np.trace(rho).real)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def product_state(factors: Sequence[np.ndarray]) -> DensityMatrix:
    return DensityMatrix(reduce(np.kron, factors))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def small_gas():
    """A dense 6x6 gas with two static probes, small enough for per-step
    invariant checks"""
    return GasConfig(
        M=6,
        N_env=12,
        eta=1.0,
        g0=0.8,
        duration=2.0,
        probe_sites=((1, 1), (1, 4)),
        snapshot_times=(0.5, 1.0, 2.0),
        seed=7,
    )
