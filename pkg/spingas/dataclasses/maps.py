from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Dict, Iterable, List, Tuple

import numpy as np

from spingas.dataclasses.density_matrix import DensityMatrix
from spingas.utils import DimensionError, walsh_matrix

PauliIndex = Tuple[int, ...]

PAULIS = {
    0: np.eye(2, dtype=complex),
    1: np.array([[0, 1], [1, 0]], dtype=complex),
    2: np.array([[0, -1j], [1j, 0]], dtype=complex),
    3: np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class SingleQubitMapCoeffs:
    """Coefficients of the single-qubit dephasing map

    E(rho) = l00 rho + l11 Z rho Z + l01 (rho Z - Z rho)

    with l00 = (1 + r cos g)/2, l11 = (1 - r cos g)/2 and l01 = i r sin g / 2.
    """

    lambda00: float
    lambda11: float
    lambda01: complex
    r: float
    gamma_phase: float

    @classmethod
    def from_r_gamma(cls, r: float, gamma_phase: float) -> "SingleQubitMapCoeffs":
        c = r * np.cos(gamma_phase)
        return cls(
            lambda00=float((1 + c) / 2),
            lambda11=float((1 - c) / 2),
            lambda01=complex(0.5j * r * np.sin(gamma_phase)),
            r=float(r),
            gamma_phase=float(gamma_phase),
        )

    def apply(self, rho: DensityMatrix) -> DensityMatrix:
        """Apply the map to a single-qubit density matrix."""
        if rho.n_qubits != 1:
            raise DimensionError(f"Expected a single qubit, got {rho.n_qubits}")
        z = PAULIS[3]
        m = rho.entries
        out = (
            self.lambda00 * m
            + self.lambda11 * z @ m @ z
            + self.lambda01 * (m @ z - z @ m)
        )
        return DensityMatrix(out)

    def choi_matrix(self) -> np.ndarray:
        """Choi matrix (A' x A ordering) of the map."""
        return PauliDiagonalMap.from_single_qubit(self).choi_matrix()


def mean_single_qubit_map(maps: Iterable[SingleQubitMapCoeffs]) -> SingleQubitMapCoeffs:
    """Average of single-qubit maps over collision realizations.

    The averaged map has the same form with averaged coefficients; r and the
    phase are recovered from the averaged coherence multiplier r e^{-i g}.
    """
    maps = list(maps)
    if not maps:
        raise ValueError("Cannot average an empty collection of maps")
    multiplier = np.mean([m.r * np.exp(-1j * m.gamma_phase) for m in maps])
    return SingleQubitMapCoeffs.from_r_gamma(
        float(np.abs(multiplier)), float(-np.angle(multiplier))
    )


@dataclass(frozen=True, eq=False)
class PauliDiagonalMap:
    """A map rho -> sum lambda_{k,l} sigma_k rho sigma_l whose Pauli strings
    contain only identity (0) and Z (3) factors.

    `coefficients` maps pairs of index tuples (one entry per qubit, each 0 or
    3) to complex values; missing pairs are zero.
    """

    n_qubits: int
    coefficients: Dict[Tuple[PauliIndex, PauliIndex], complex]

    def __post_init__(self):
        for k, l in self.coefficients:
            if len(k) != self.n_qubits or len(l) != self.n_qubits:
                raise DimensionError(
                    f"Index pair {(k, l)} does not match {self.n_qubits} qubits"
                )
            if any(i not in (0, 3) for i in k + l):
                raise ValueError(f"Index pair {(k, l)} leaves the identity/Z sector")

    @classmethod
    def from_single_qubit(cls, coeffs: SingleQubitMapCoeffs) -> "PauliDiagonalMap":
        return cls(
            1,
            {
                ((0,), (0,)): complex(coeffs.lambda00),
                ((3,), (3,)): complex(coeffs.lambda11),
                ((0,), (3,)): coeffs.lambda01,
                ((3,), (0,)): -coeffs.lambda01,
            },
        )

    @staticmethod
    def mask_of(index: PauliIndex) -> int:
        """Bit mask of the Z positions of a Pauli index (qubit 0 is the most
        significant bit)."""
        mask = 0
        for i in index:
            mask = (mask << 1) | (1 if i == 3 else 0)
        return mask

    @staticmethod
    def index_of(mask: int, n_qubits: int) -> PauliIndex:
        return tuple(
            3 if (mask >> (n_qubits - 1 - j)) & 1 else 0 for j in range(n_qubits)
        )

    def coefficient_matrix(self) -> np.ndarray:
        """lambda as a 2^n x 2^n matrix indexed by Z masks."""
        dim = 2**self.n_qubits
        lam = np.zeros((dim, dim), dtype=complex)
        for (k, l), value in self.coefficients.items():
            lam[self.mask_of(k), self.mask_of(l)] = value
        return lam

    @cached_property
    def multipliers(self) -> np.ndarray:
        """Coherence-multiplier table C with E(rho)_{ss'} = C_{ss'} rho_{ss'}."""
        w = walsh_matrix(self.n_qubits)
        return w @ self.coefficient_matrix() @ w.T

    def apply(self, rho: DensityMatrix) -> DensityMatrix:
        if rho.n_qubits != self.n_qubits:
            raise DimensionError(
                f"Map acts on {self.n_qubits} qubits, state has {rho.n_qubits}"
            )
        return DensityMatrix(self.multipliers * rho.entries)

    def choi_matrix(self) -> np.ndarray:
        """Choi matrix sum lambda_{kl} |phi_k><phi_l| in the pairwise
        (A'_0 A_0 A'_1 A_1 ...) ordering."""
        vectors = bell_pauli_vectors(self.n_qubits, sector=(0, 3))
        # columns ordered like the masks of coefficient_matrix
        basis = np.stack(list(vectors.values()), axis=1)
        return basis @ self.coefficient_matrix() @ basis.conj().T

    def to_records(
        self, atol: float = 0.0
    ) -> List[Tuple[PauliIndex, PauliIndex, complex]]:
        """Sparse coefficient list, sorted by index pair."""
        return [
            (k, l, v)
            for (k, l), v in sorted(self.coefficients.items())
            if abs(v) > atol
        ]


def bell_pauli_vectors(
    n_qubits: int, sector=(0, 1, 2, 3)
) -> Dict[PauliIndex, np.ndarray]:
    """|phi_k> = (1 x sigma_k)|Phi> for every Pauli index k over `sector`,
    with |Phi> the product of |phi+> on each (A'_j, A_j) pair."""
    phi_plus = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    single = {i: np.kron(PAULIS[0], PAULIS[i]) @ phi_plus for i in sector}
    out: Dict[PauliIndex, np.ndarray] = {}
    for index in product(sector, repeat=n_qubits):
        vec = np.ones(1, dtype=complex)
        for i in index:
            vec = np.kron(vec, single[i])
        out[index] = vec
    return out
