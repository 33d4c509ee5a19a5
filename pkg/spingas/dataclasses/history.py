from dataclasses import dataclass, field
from typing import Optional

import networkx as nx
import numpy as np

from spingas.utils import DimensionError


@dataclass(frozen=True)
class InteractionHistory:
    """Accumulated probe-environment interaction phases at one time.

    `gamma[k, l]` is the phase between probe k and environment particle l.
    `gamma_AA` holds probe-probe phases; it is all zeros unless the
    simulation accumulates them.
    """

    gamma: np.ndarray
    time: float = 0.0
    gamma_AA: Optional[np.ndarray] = field(default=None, compare=False)

    def __post_init__(self):
        gamma = np.array(self.gamma, dtype=float, copy=True)
        if gamma.ndim != 2:
            raise DimensionError(f"gamma must be a matrix, got shape {gamma.shape}")
        gamma.setflags(write=False)
        object.__setattr__(self, "gamma", gamma)
        n = gamma.shape[0]
        if self.gamma_AA is None:
            gamma_AA = np.zeros((n, n))
        else:
            gamma_AA = np.array(self.gamma_AA, dtype=float, copy=True)
            if gamma_AA.shape != (n, n):
                raise DimensionError(
                    f"gamma_AA has shape {gamma_AA.shape}, expected {(n, n)}"
                )
        gamma_AA.setflags(write=False)
        object.__setattr__(self, "gamma_AA", gamma_AA)

    def __eq__(self, other) -> bool:
        if not isinstance(other, InteractionHistory):
            return NotImplemented
        return (
            self.time == other.time
            and np.array_equal(self.gamma, other.gamma)
            and np.array_equal(self.gamma_AA, other.gamma_AA)
        )

    @classmethod
    def zeros(cls, n_probes: int, n_env: int, time: float = 0.0):
        return cls(np.zeros((n_probes, n_env)), time)

    @property
    def n_probes(self) -> int:
        return self.gamma.shape[0]

    @property
    def n_env(self) -> int:
        return self.gamma.shape[1]

    def total_phase(self) -> np.ndarray:
        """Total phase accumulated by each probe."""
        return self.gamma.sum(axis=1)

    def __add__(self, other: "InteractionHistory") -> "InteractionHistory":
        if self.gamma.shape != other.gamma.shape:
            raise DimensionError(
                f"Cannot add histories of shapes {self.gamma.shape} and "
                f"{other.gamma.shape}"
            )
        return InteractionHistory(
            self.gamma + other.gamma,
            max(self.time, other.time),
            self.gamma_AA + other.gamma_AA,  # type: ignore
        )

    def to_graph(self) -> nx.Graph:
        """The weighted interaction graph whose adjacency is this history.

        Probe nodes are ("A", k), environment nodes ("B", l); only pairs with
        a non-zero phase become edges.
        """
        g = nx.Graph()
        g.add_nodes_from((("A", k) for k in range(self.n_probes)), part="A")
        g.add_nodes_from((("B", l) for l in range(self.n_env)), part="B")
        for k, l in zip(*np.nonzero(self.gamma)):
            g.add_edge(("A", int(k)), ("B", int(l)), weight=float(self.gamma[k, l]))
        assert self.gamma_AA is not None
        for j, k in zip(*np.nonzero(np.triu(self.gamma_AA, 1))):
            g.add_edge(("A", int(j)), ("A", int(k)), weight=float(self.gamma_AA[j, k]))
        return g
