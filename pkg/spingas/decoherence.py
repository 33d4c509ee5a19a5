"""Exact evolution of probe density matrices under an interaction history.

For commuting pairwise Hamiltonians and an environment prepared in
|+>^{N_B}, every coherence rho_{ss'} of the probes is multiplied by a factor
that depends only on the difference s - s' and on Gamma:

    Projector11:  C = exp(i/2 sum_l theta_l) prod_l cos(theta_l / 2)
    IsingZZ:      C = prod_l cos(2 theta_l)

with theta_l = (s - s') . Gamma[:, l]. Both forms match the full-state
evolution in :mod:`spingas.oracle`, whose Projector11 gate puts e^{+i phi}
on |11>.
"""
import logging
from functools import lru_cache
from itertools import product
from typing import Sequence, Tuple

import numpy as np

from spingas.dataclasses.density_matrix import DensityMatrix, HamiltonianConvention
from spingas.dataclasses.history import InteractionHistory
from spingas.dataclasses.maps import (
    PauliDiagonalMap,
    SingleQubitMapCoeffs,
    bell_pauli_vectors,
)
from spingas.utils import BitVector, DimensionError, as_bits, basis_bits

logger = logging.getLogger(__name__)

# above this many environment particles, cosine products are summed in logs
LOG_PRODUCT_THRESHOLD = 1000
# bound on the size of one (differences x particles) phase block
_BLOCK_ELEMENTS = 1 << 22
MAX_MAP_STATE_QUBITS = 6


class MapConsistencyError(RuntimeError):
    """Raised when a map state has weight outside the identity/Z sector."""


@lru_cache(maxsize=16)
def _differences(n_qubits: int) -> np.ndarray:
    """All difference vectors in {-1, 0, 1}^n, in base-3 code order."""
    diffs = np.array(list(product((-1, 0, 1), repeat=n_qubits)), dtype=float)
    diffs = diffs.reshape(-1, n_qubits)
    diffs.setflags(write=False)
    return diffs


@lru_cache(maxsize=16)
def _difference_codes(n_qubits: int) -> np.ndarray:
    """codes[s, s'] indexes the difference bits(s) - bits(s') in
    :func:`_differences`."""
    bits = basis_bits(n_qubits).astype(np.int64)
    powers = 3 ** np.arange(n_qubits - 1, -1, -1, dtype=np.int64)
    codes = (bits[:, None, :] - bits[None, :, :] + 1) @ powers
    codes.setflags(write=False)
    return codes


def _cos_product(angles: np.ndarray, use_logs: bool) -> np.ndarray:
    """Product of cos(angles) along the last axis."""
    cosines = np.cos(angles)
    if not use_logs:
        return np.prod(cosines, axis=-1)
    with np.errstate(divide="ignore"):
        log_magnitude = np.sum(np.log(np.abs(cosines)), axis=-1)
    sign = 1.0 - 2.0 * (np.count_nonzero(cosines < 0, axis=-1) % 2)
    return sign * np.exp(log_magnitude)


def _multiplier_from_thetas(
    thetas: np.ndarray, convention: HamiltonianConvention, use_logs: bool
) -> Tuple[np.ndarray, np.ndarray]:
    """(cosine product, phase sum) for a block of theta rows."""
    if convention == HamiltonianConvention.PROJECTOR11:
        return _cos_product(thetas / 2, use_logs), thetas.sum(axis=-1) / 2
    return _cos_product(2 * thetas, use_logs), np.zeros(thetas.shape[:-1])


def coherence_table(
    history: InteractionHistory, convention: HamiltonianConvention
) -> np.ndarray:
    """Coherence multiplier for every difference vector in {-1, 0, 1}^N_A.

    Work is split into blocks of environment particles so that memory stays
    bounded and the cost is linear in N_B.

    :return: complex array of length 3^N_A in base-3 code order
    :rtype: np.ndarray
    """
    convention = HamiltonianConvention(convention)
    diffs = _differences(history.n_probes)
    n_env = history.n_env
    use_logs = n_env > LOG_PRODUCT_THRESHOLD
    block = max(1, _BLOCK_ELEMENTS // diffs.shape[0])

    magnitude = np.ones(diffs.shape[0])
    phase = np.zeros(diffs.shape[0])
    for start in range(0, n_env, block):
        thetas = diffs @ history.gamma[:, start : start + block]
        part, phase_part = _multiplier_from_thetas(thetas, convention, use_logs)
        magnitude *= part
        phase += phase_part
    return magnitude * np.exp(1j * phase)


def coherence_multipliers(
    history: InteractionHistory, convention: HamiltonianConvention
) -> np.ndarray:
    """The 2^N_A x 2^N_A table C with rho_{ss'}(t) = C_{ss'} rho_{ss'}(0)."""
    table = coherence_table(history, convention)
    return table[_difference_codes(history.n_probes)]


def coherence_factor(
    history: InteractionHistory,
    s: BitVector,
    s_prime: BitVector,
    convention: HamiltonianConvention,
) -> complex:
    """Coherence multiplier C_{ss'} for one pair of probe basis states.

    :param history: interaction history
    :type history: InteractionHistory
    :param s: row basis state, e.g. "01" or [0, 1]
    :type s: BitVector
    :param s_prime: column basis state
    :type s_prime: BitVector
    :param convention: interaction Hamiltonian
    :type convention: HamiltonianConvention
    :raises DimensionError: if the bit vectors do not have N_A entries
    :return: the complex multiplier
    :rtype: complex
    """
    convention = HamiltonianConvention(convention)
    n = history.n_probes
    diff = (as_bits(s, n) - as_bits(s_prime, n)).astype(float)
    if not diff.any():
        return 1 + 0j
    thetas = diff @ history.gamma
    magnitude, phase = _multiplier_from_thetas(
        thetas, convention, history.n_env > LOG_PRODUCT_THRESHOLD
    )
    return complex(magnitude * np.exp(1j * phase))


def _hermitize(matrix: np.ndarray) -> np.ndarray:
    return (matrix + matrix.conj().T) / 2


def apply_decoherence(
    rho0: DensityMatrix,
    history: InteractionHistory,
    convention: HamiltonianConvention,
) -> DensityMatrix:
    """Evolve a probe state under the interaction history: every entry is
    multiplied by its coherence factor.

    :param rho0: initial probe state
    :type rho0: DensityMatrix
    :param history: interaction history with one row per probe qubit
    :type history: InteractionHistory
    :param convention: interaction Hamiltonian
    :type convention: HamiltonianConvention
    :raises DimensionError: if the history does not match the state
    :return: the decohered state
    :rtype: DensityMatrix
    """
    if history.n_probes != rho0.n_qubits:
        raise DimensionError(
            f"History has {history.n_probes} probes, state has {rho0.n_qubits} qubits"
        )
    multipliers = coherence_multipliers(history, convention)
    return DensityMatrix(_hermitize(multipliers * rho0.entries))


def single_qubit_map(
    phases: Sequence[float], convention: HamiltonianConvention
) -> SingleQubitMapCoeffs:
    """Map coefficients of a single probe qubit given its phases with every
    environment particle.

    For Projector11, r = prod cos(phi_l / 2) and g = sum phi_l / 2. For
    IsingZZ the multiplier is real: r = prod cos(2 phi_l) and g = 0.
    """
    convention = HamiltonianConvention(convention)
    phases = np.asarray(phases, dtype=float).ravel()
    use_logs = phases.shape[0] > LOG_PRODUCT_THRESHOLD
    if convention == HamiltonianConvention.PROJECTOR11:
        r = _cos_product(phases / 2, use_logs)
        gamma_phase = phases.sum() / 2
    else:
        r = _cos_product(2 * phases, use_logs)
        gamma_phase = 0.0
    return SingleQubitMapCoeffs.from_r_gamma(float(r), float(gamma_phase))


def dephasing_prob(phases: Sequence[float]) -> float:
    """p_k = (1 + prod_l cos(2 phi_kl)) / 2 of the single-qubit dephasing
    map under the Ising interaction."""
    phases = np.asarray(phases, dtype=float).ravel()
    product_ = _cos_product(2 * phases, phases.shape[0] > LOG_PRODUCT_THRESHOLD)
    return float(np.clip((1 + product_) / 2, 0.0, 1.0))


def product_dephasing_apply(rho0: DensityMatrix, p: Sequence[float]) -> DensityMatrix:
    """Apply the product of single-qubit dephasing maps
    E_k(rho) = p_k rho + (1 - p_k) Z_k rho Z_k.

    :param rho0: input state
    :type rho0: DensityMatrix
    :param p: one probability per qubit, each in [0, 1]
    :type p: Sequence[float]
    :raises DimensionError: if len(p) != n_qubits
    :return: dephased state
    :rtype: DensityMatrix
    """
    p = np.asarray(p, dtype=float).ravel()
    if p.shape[0] != rho0.n_qubits:
        raise DimensionError(
            f"Got {p.shape[0]} dephasing probabilities for {rho0.n_qubits} qubits"
        )
    if np.any((p < 0) | (p > 1)):
        raise ValueError(f"Dephasing probabilities must lie in [0, 1], got {p}")
    multipliers = np.ones((1, 1))
    for q in 2 * p - 1:
        multipliers = np.kron(multipliers, np.array([[1.0, q], [q, 1.0]]))
    return DensityMatrix(multipliers * rho0.entries)


def _branch_vectors(
    phases: np.ndarray, convention: HamiltonianConvention
) -> Tuple[np.ndarray, np.ndarray]:
    """Map-state vectors (1 x U_b)|Phi> for environment branch |0> and |1>
    of one particle, in the full pairwise (A'_0 A_0 A'_1 A_1 ...) basis."""
    n = phases.shape[0]
    phi = _phi_plus(n)
    # the gate acts on the A half of every pair
    a_bits = basis_bits(2 * n)[:, 1::2]
    if convention == HamiltonianConvention.PROJECTOR11:
        v0 = phi
        v1 = phi * np.exp(1j * (a_bits @ phases))
    else:
        z = 1 - 2 * a_bits.astype(float)
        v0 = phi * np.exp(-1j * (z @ phases))
        v1 = phi * np.exp(1j * (z @ phases))
    return v0, v1


def _phi_plus(n_qubits: int) -> np.ndarray:
    """|Phi>, the product of |phi+> over the (A'_j, A_j) pairs."""
    phi = np.zeros(4**n_qubits, dtype=complex)
    phi[_support_indices(n_qubits)] = 2 ** (-n_qubits / 2)
    return phi


def _support_indices(n_qubits: int) -> np.ndarray:
    """Indices of |s>_A'|s>_A in the pairwise (A'_0 A_0 A'_1 A_1 ...)
    ordering. Read as flat Pauli indices they are the identity/Z strings,
    in the order of their Z masks."""
    bits = basis_bits(n_qubits).astype(np.int64)
    # each qubit bit b becomes the two-bit block bb (0 -> 0, 1 -> 3)
    weights = 4 ** np.arange(n_qubits - 1, -1, -1, dtype=np.int64)
    return (3 * bits) @ weights


def _to_bell_pauli(choi: np.ndarray, n_qubits: int) -> np.ndarray:
    """B^dag choi B for the full tensor Bell-Pauli basis B, whose column for
    the Pauli index (i_0, ..., i_{n-1}) is sum_j i_j 4^(n-1-j)."""
    single = bell_pauli_vectors(1)
    u = np.stack([single[(i,)] for i in range(4)], axis=1)
    t = choi.reshape((4,) * (2 * n_qubits))
    for axis in range(n_qubits):
        t = np.moveaxis(np.tensordot(u.conj().T, t, axes=([1], [axis])), 0, axis)
    for axis in range(n_qubits, 2 * n_qubits):
        t = np.moveaxis(np.tensordot(t, u, axes=([axis], [0])), -1, axis)
    return t.reshape(choi.shape)


def build_map_state(
    history: InteractionHistory,
    convention: HamiltonianConvention,
    atol: float = 1e-12,
) -> PauliDiagonalMap:
    """Construct the decoherence map from its Choi state.

    Each environment particle l contributes
    E^(l) = (|v0><v0| + |v1><v1|)/2, the average over the particle's two
    branches, built over all 4^N_A computational basis states. The states
    are composed by componentwise (Hadamard) multiplication, normalized to
    unit trace and expanded over every tensor Bell-Pauli vector. Weight on
    any Pauli string other than identity/Z is an error.

    :param history: interaction history, at most 6 probes
    :type history: InteractionHistory
    :param convention: interaction Hamiltonian
    :type convention: HamiltonianConvention
    :param atol: tolerance for weight outside the identity/Z sector
    :type atol: float
    :raises DimensionError: for more than 6 probes
    :raises MapConsistencyError: if the map state leaks out of the sector
    :return: the map coefficients
    :rtype: PauliDiagonalMap
    """
    convention = HamiltonianConvention(convention)
    n = history.n_probes
    if n > MAX_MAP_STATE_QUBITS:
        raise DimensionError(
            f"Map states are limited to {MAX_MAP_STATE_QUBITS} qubits, got {n}"
        )
    dim = 4**n
    if n > 3:
        logger.debug(f"Building {dim}x{dim} map state for {n} probes")

    if history.n_env == 0:
        phi = _phi_plus(n)
        composed = np.outer(phi, phi.conj())
    else:
        # factors are rescaled by 2^n so long products stay O(1)
        composed = np.ones((dim, dim), dtype=complex)
    for l in range(history.n_env):
        v0, v1 = _branch_vectors(history.gamma[:, l], convention)
        e_l = np.outer(v0, v0.conj())
        e_l += np.outer(v1, v1.conj())
        e_l *= 2 ** (n - 1)
        composed *= e_l
    composed /= np.trace(composed)

    lam = _to_bell_pauli(composed, n)
    sector = _support_indices(n)
    outside = np.ones((dim, dim), dtype=bool)
    outside[np.ix_(sector, sector)] = False
    leakage = float(np.max(np.abs(lam[outside])))
    if leakage > atol:
        raise MapConsistencyError(
            f"Map state has weight {leakage} outside the identity/Z sector"
        )
    lam = lam[np.ix_(sector, sector)]
    coefficients = {
        (PauliDiagonalMap.index_of(i, n), PauliDiagonalMap.index_of(j, n)): complex(
            lam[i, j]
        )
        for i in range(2**n)
        for j in range(2**n)
    }
    return PauliDiagonalMap(n, coefficients)


def apply_intra_probe_phases(
    rho: DensityMatrix,
    gamma_AA: np.ndarray,
    convention: HamiltonianConvention,
    atol: float = 1e-12,
) -> DensityMatrix:
    """Apply the diagonal two-qubit phase gates between probe pairs.

    :param rho: probe state
    :type rho: DensityMatrix
    :param gamma_AA: symmetric N_A x N_A phase matrix with zero diagonal
    :type gamma_AA: np.ndarray
    :param convention: interaction Hamiltonian
    :type convention: HamiltonianConvention
    :raises DimensionError: if the matrix does not match the state
    :raises ValueError: if the matrix is not symmetric with zero diagonal
    :return: the rotated state
    :rtype: DensityMatrix
    """
    u = intra_probe_unitary(gamma_AA, convention, rho.n_qubits, atol)
    return DensityMatrix(u[:, None] * rho.entries * u.conj()[None, :])


def intra_probe_unitary(
    gamma_AA: np.ndarray,
    convention: HamiltonianConvention,
    n_qubits: int,
    atol: float = 1e-12,
) -> np.ndarray:
    """Diagonal of the product of probe-probe phase gates.

    :raises DimensionError: if the matrix is not n_qubits x n_qubits
    :raises ValueError: if the matrix is not symmetric with zero diagonal
    """
    convention = HamiltonianConvention(convention)
    gamma_AA = np.asarray(gamma_AA, dtype=float)
    n = n_qubits
    if gamma_AA.shape != (n, n):
        raise DimensionError(f"gamma_AA has shape {gamma_AA.shape}, expected {(n, n)}")
    if np.max(np.abs(gamma_AA - gamma_AA.T), initial=0.0) > atol:
        raise ValueError("gamma_AA must be symmetric")
    if np.max(np.abs(np.diag(gamma_AA)), initial=0.0) > atol:
        raise ValueError("gamma_AA must have a zero diagonal")
    upper = np.triu(gamma_AA, 1)
    bits = basis_bits(n).astype(float)
    if convention == HamiltonianConvention.PROJECTOR11:
        phase = np.einsum("sj,jk,sk->s", bits, upper, bits)
    else:
        z = 1 - 2 * bits
        phase = -np.einsum("sj,jk,sk->s", z, upper, z)
    return np.exp(1j * phase)
