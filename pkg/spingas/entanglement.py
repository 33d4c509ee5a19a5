"""Two-qubit concurrence and bipartition negativities of probe states."""
import numpy as np

from spingas.dataclasses.bipartition import (
    Bipartition,
    NegativitySummary,
    all_bipartitions,
)
from spingas.dataclasses.density_matrix import DensityMatrix
from spingas.dataclasses.maps import PAULIS
from spingas.utils import DimensionError

# eigenvalues in (-NEGATIVITY_FLOOR, 0) are treated as zero
NEGATIVITY_FLOOR = 1e-12
SIGMA_YY = np.kron(PAULIS[2], PAULIS[2])


def concurrence(rho: DensityMatrix) -> float:
    """Wootters concurrence max(0, l1 - l2 - l3 - l4) of a two-qubit state,
    where l_i are the decreasing square roots of the eigenvalues of
    rho (Y x Y) rho* (Y x Y).

    :param rho: two-qubit density matrix
    :type rho: DensityMatrix
    :raises DimensionError: if rho is not a two-qubit state
    :return: concurrence in [0, 1]
    :rtype: float
    """
    if rho.n_qubits != 2:
        raise DimensionError(f"Concurrence needs two qubits, got {rho.n_qubits}")
    m = rho.entries
    r = m @ SIGMA_YY @ m.conj() @ SIGMA_YY
    # abs of the real part guards against tiny negative round-off
    roots = np.sort(np.sqrt(np.abs(np.real(np.linalg.eigvals(r)))))[::-1]
    return float(max(0.0, roots[0] - roots[1] - roots[2] - roots[3]))


def _check_partition(rho: DensityMatrix, part: Bipartition):
    if part.n_qubits != rho.n_qubits:
        raise DimensionError(
            f"Bipartition of {part.n_qubits} qubits used on a "
            f"{rho.n_qubits}-qubit state"
        )


def partial_transpose(rho: DensityMatrix, part: Bipartition) -> np.ndarray:
    """Transpose of rho over the qubits of `part.subset`.

    :param rho: density matrix
    :type rho: DensityMatrix
    :param part: bipartition of rho's qubits
    :type part: Bipartition
    :raises DimensionError: if the bipartition does not match rho
    :return: the partially transposed matrix
    :rtype: np.ndarray
    """
    _check_partition(rho, part)
    n = rho.n_qubits
    axes = list(range(2 * n))
    for q in part.subset:
        axes[q], axes[n + q] = axes[n + q], axes[q]
    tensor = rho.entries.reshape([2] * (2 * n)).transpose(axes)
    return tensor.reshape(rho.dim, rho.dim)


def negativity(rho: DensityMatrix, part: Bipartition) -> float:
    """(||rho^T_A||_1 - 1) / 2, computed as the absolute sum of the negative
    eigenvalues of the Hermitian partial transpose."""
    pt = partial_transpose(rho, part)
    eigenvalues = np.linalg.eigvalsh((pt + pt.conj().T) / 2)
    negative = eigenvalues[eigenvalues <= -NEGATIVITY_FLOOR]
    return float(-negative.sum())


def negativity_summary(rho: DensityMatrix) -> NegativitySummary:
    """Negativities of all 2^(N-1) - 1 canonical bipartitions with their
    average and minimum.

    :param rho: density matrix with at least two qubits
    :type rho: DensityMatrix
    :raises DimensionError: for fewer than two qubits
    :return: the summary
    :rtype: NegativitySummary
    """
    n = rho.n_qubits
    if n < 2:
        raise DimensionError(f"Negativity summary needs >= 2 qubits, got {n}")
    values = {part: negativity(rho, part) for part in all_bipartitions(n)}
    return NegativitySummary.from_values(values)
