from dataclasses import dataclass
from typing import Dict, Iterator, Tuple

import numpy as np

from spingas.utils import DimensionError


@dataclass(frozen=True, order=True)
class Bipartition:
    """An unordered split of `n_qubits` probe qubits into `subset` and its
    complement.

    The canonical representative is the side containing qubit 0. Bit j of
    :attr:`mask` is set when qubit j is in the subset.
    """

    n_qubits: int
    subset: Tuple[int, ...]

    def __post_init__(self):
        subset = tuple(sorted(set(int(q) for q in self.subset)))
        if any(q < 0 or q >= self.n_qubits for q in subset):
            raise DimensionError(
                f"Subset {subset} is out of range for {self.n_qubits} qubits"
            )
        if not subset or len(subset) == self.n_qubits:
            raise DimensionError(
                f"Subset {subset} must be a nonempty proper subset of "
                f"{self.n_qubits} qubits"
            )
        if 0 not in subset:
            subset = tuple(q for q in range(self.n_qubits) if q not in subset)
        object.__setattr__(self, "subset", subset)

    @classmethod
    def from_mask(cls, n_qubits: int, mask: int) -> "Bipartition":
        return cls(n_qubits, tuple(q for q in range(n_qubits) if (mask >> q) & 1))

    @property
    def mask(self) -> int:
        return sum(1 << q for q in self.subset)

    @property
    def complement(self) -> Tuple[int, ...]:
        return tuple(q for q in range(self.n_qubits) if q not in self.subset)

    def __str__(self) -> str:
        left = "".join(str(q) for q in self.subset)
        right = "".join(str(q) for q in self.complement)
        return f"{left}|{right}"


def all_bipartitions(n_qubits: int) -> Iterator[Bipartition]:
    """The 2^(n-1) - 1 canonical bipartitions, by increasing mask."""
    full = (1 << n_qubits) - 1
    for mask in range(1, full, 2):
        yield Bipartition.from_mask(n_qubits, mask)


@dataclass(frozen=True)
class NegativitySummary:
    """Negativity of every bipartition together with the average and minimum
    over all of them."""

    per_partition: Dict[Bipartition, float]
    average: float
    minimum: float

    @classmethod
    def from_values(
        cls, per_partition: Dict[Bipartition, float]
    ) -> "NegativitySummary":
        if not per_partition:
            raise DimensionError("A negativity summary needs at least one bipartition")
        values = np.fromiter(per_partition.values(), dtype=float)
        return cls(dict(per_partition), float(np.mean(values)), float(np.min(values)))

    @property
    def n_qubits(self) -> int:
        return next(iter(self.per_partition)).n_qubits

    def to_record(self) -> Dict[int, float]:
        """Flat record keyed by partition bitmask."""
        return {part.mask: value for part, value in sorted(self.per_partition.items())}
