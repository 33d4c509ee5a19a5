"""Named probe states: Bell pairs, GHZ variants, W and graph states."""
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Union

import networkx as nx
import numpy as np

from spingas.dataclasses.density_matrix import MAX_QUBITS, DensityMatrix
from spingas.utils import ConfigurationError, basis_bits

PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
MINUS = np.array([1, -1], dtype=complex) / np.sqrt(2)
ZERO = np.array([1, 0], dtype=complex)
ONE = np.array([0, 1], dtype=complex)


class StateFamily(str, Enum):
    BELL_PHI_PLUS = "BellPhiPlus"
    BELL_PSI_PLUS = "BellPsiPlus"
    TWO_QUBIT_CLUSTER = "TwoQubitCluster"
    GHZ = "GHZ"
    GHZ_PRIME = "GHZPrime"
    GHZ_DOUBLE_PRIME = "GHZDoublePrime"
    W = "W"
    LINEAR_CLUSTER = "LinearCluster"


TWO_QUBIT_FAMILIES = {
    StateFamily.BELL_PHI_PLUS,
    StateFamily.BELL_PSI_PLUS,
    StateFamily.TWO_QUBIT_CLUSTER,
}


@dataclass(frozen=True)
class StateSpec:
    """A named probe state on `n_qubits` qubits."""

    family: StateFamily
    n_qubits: int

    def __post_init__(self):
        try:
            object.__setattr__(self, "family", StateFamily(self.family))
        except ValueError:
            names = ", ".join(f.value for f in StateFamily)
            raise ConfigurationError(
                "state.family",
                f"Unknown family {self.family!r}; expected one of {names}",
            )

    def validate(self, prefix: str = "state") -> "StateSpec":
        """
        :raises ConfigurationError: if the qubit count is incompatible with
            the family or outside [1, 10]
        """
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise ConfigurationError(
                f"{prefix}.n_qubits",
                f"must lie in [1, {MAX_QUBITS}], got {self.n_qubits}",
            )
        if self.family in TWO_QUBIT_FAMILIES and self.n_qubits != 2:
            raise ConfigurationError(
                f"{prefix}.n_qubits",
                f"{self.family.value} requires 2 qubits, got {self.n_qubits}",
            )
        return self

    def to_dict(self) -> Dict[str, Union[str, int]]:
        return {"family": self.family.value, "n_qubits": self.n_qubits}


def _product(*factors: np.ndarray) -> np.ndarray:
    out = np.ones(1, dtype=complex)
    for f in factors:
        out = np.kron(out, f)
    return out


def _power(vec: np.ndarray, n: int) -> np.ndarray:
    return _product(*([vec] * n))


def graph_state(graph: nx.Graph) -> np.ndarray:
    """|+>^N with a controlled-phase gate on every edge.

    Qubits are the graph's nodes in sorted order.

    :param graph: the interaction graph
    :type graph: nx.Graph
    :return: normalized state vector of length 2^N
    :rtype: np.ndarray
    """
    nodes = sorted(graph.nodes)
    position = {node: i for i, node in enumerate(nodes)}
    bits = basis_bits(len(nodes)).astype(np.int64)
    parity = np.zeros(bits.shape[0], dtype=np.int64)
    for u, v in graph.edges:
        parity += bits[:, position[u]] * bits[:, position[v]]
    signs = 1 - 2 * (parity % 2)
    return signs.astype(complex) / np.sqrt(bits.shape[0])


def _w_vector(n: int) -> np.ndarray:
    psi = np.zeros(2**n, dtype=complex)
    for k in range(n):
        psi[1 << (n - 1 - k)] = 1
    return psi / np.sqrt(n)


def make_state_vector(spec: StateSpec) -> np.ndarray:
    """Normalized state vector of a named family. Qubit 0 is the leftmost
    factor and the distinguished qubit of the GHZ variants."""
    spec.validate()
    n = spec.n_qubits
    family = spec.family
    if family == StateFamily.BELL_PHI_PLUS:
        psi = _product(ZERO, ZERO) + _product(ONE, ONE)
    elif family == StateFamily.BELL_PSI_PLUS:
        psi = _product(ZERO, ONE) + _product(ONE, ZERO)
    elif family in (StateFamily.TWO_QUBIT_CLUSTER, StateFamily.LINEAR_CLUSTER):
        return graph_state(nx.path_graph(n))
    elif family == StateFamily.GHZ:
        psi = _power(ZERO, n) + _power(ONE, n)
    elif family == StateFamily.GHZ_PRIME:
        psi = _product(ZERO, _power(PLUS, n - 1)) + _product(ONE, _power(MINUS, n - 1))
    elif family == StateFamily.GHZ_DOUBLE_PRIME:
        psi = _product(PLUS, _power(ZERO, n - 1)) + _product(MINUS, _power(ONE, n - 1))
    else:
        return _w_vector(n)
    return psi / np.linalg.norm(psi)


def make_state(spec: StateSpec) -> DensityMatrix:
    """Pure density matrix of a named family.

    :param spec: family and qubit count
    :type spec: StateSpec
    :raises ConfigurationError: for an incompatible qubit count
    :return: the projector onto the state
    :rtype: DensityMatrix
    """
    return DensityMatrix.from_state_vector(make_state_vector(spec))
