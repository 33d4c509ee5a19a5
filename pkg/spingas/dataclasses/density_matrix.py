from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from spingas.utils import DimensionError, n_qubits_of

MAX_QUBITS = 10


class DensityMatrixError(ValueError):
    """Raised when a matrix violates the density-matrix invariants."""


class HamiltonianConvention(str, Enum):
    """Pairwise probe-environment interaction Hamiltonian.

    PROJECTOR11 is H_kl = |11><11|; ISING_ZZ is H_kl = Z_k Z_l evolved as
    exp(-i phi Z Z).
    """

    PROJECTOR11 = "Projector11"
    ISING_ZZ = "IsingZZ"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Immutable 2^n x 2^n density matrix of the probe register.

    Qubit 0 is the most significant bit of the basis index.
    """

    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex, copy=True)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DimensionError(f"Density matrix must be square, got {entries.shape}")
        n = n_qubits_of(entries.shape[0])
        if n > MAX_QUBITS:
            raise DimensionError(f"{n} qubits exceeds the limit of {MAX_QUBITS}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_state_vector(cls, psi: np.ndarray) -> "DensityMatrix":
        """Projector onto a state vector, which is normalized first."""
        psi = np.asarray(psi, dtype=complex).ravel()
        norm = np.linalg.norm(psi)
        if norm == 0:
            raise DensityMatrixError("Cannot build a density matrix from a zero vector")
        psi = psi / norm
        return cls(np.outer(psi, psi.conj()))

    @classmethod
    def maximally_mixed(cls, n_qubits: int) -> "DensityMatrix":
        dim = 2**n_qubits
        return cls(np.eye(dim) / dim)

    @property
    def n_qubits(self) -> int:
        return n_qubits_of(self.entries.shape[0])

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def purity(self) -> float:
        return float(np.real(np.trace(self.entries @ self.entries)))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)

    def validate(
        self, hermitian_atol: float = 1e-12, trace_atol: float = 1e-12, eig_floor=-1e-10
    ) -> "DensityMatrix":
        """Check Hermiticity, unit trace and positivity.

        :raises DensityMatrixError: on the first violated invariant
        :return: this matrix
        :rtype: DensityMatrix
        """
        deviation = np.max(np.abs(self.entries - self.entries.conj().T))
        if deviation > hermitian_atol:
            raise DensityMatrixError(f"Matrix is not Hermitian (deviation {deviation})")
        tr = self.trace()
        if abs(tr - 1) > trace_atol:
            raise DensityMatrixError(f"Trace is {tr}, expected 1")
        smallest = float(self.eigenvalues()[0])
        if smallest < eig_floor:
            raise DensityMatrixError(f"Negative eigenvalue {smallest}")
        return self

    def reduce(self, keep: Sequence[int]) -> "DensityMatrix":
        """Reduced density matrix of the qubits in `keep` (in that order)."""
        n = self.n_qubits
        keep = list(keep)
        if any(q < 0 or q >= n for q in keep) or len(set(keep)) != len(keep):
            raise DimensionError(f"Invalid qubit selection {keep} for {n} qubits")
        traced = [q for q in range(n) if q not in keep]
        tensor = self.entries.reshape([2] * (2 * n))
        # move kept row axes, traced row axes, kept column axes, traced column axes
        perm = keep + traced + [n + q for q in keep] + [n + q for q in traced]
        tensor = tensor.transpose(perm)
        dk, dt = 2 ** len(keep), 2 ** len(traced)
        reduced = np.einsum("atbt->ab", tensor.reshape(dk, dt, dk, dt))
        return DensityMatrix(reduced)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    def allclose(self, other: "DensityMatrix", atol: float = 1e-12) -> bool:
        """Max-entry distance to `other` is within `atol`."""
        if self.dim != other.dim:
            return False
        return bool(np.max(np.abs(self.entries - other.entries)) <= atol)
