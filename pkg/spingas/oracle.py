"""Brute-force reference evolution of probes and environment.

The joint pure state of the probes, an optional purifying ancilla and the
environment in |+>^N_B is evolved gate by gate under the diagonal pairwise
phase gates, then the environment and ancilla are traced out.
"""
import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from spingas.dataclasses.density_matrix import DensityMatrix, HamiltonianConvention
from spingas.utils import DimensionError, basis_bits

logger = logging.getLogger(__name__)

MAX_TOTAL_QUBITS = 14


class OracleBoundError(ValueError):
    """Raised when probes and environment together exceed the qubit bound."""


@dataclass(frozen=True)
class FullStateSpec:
    """Inputs of one brute-force evolution.

    `gate_order` optionally permutes the (k, l) gate sequence and
    `env_phases` optionally applies a diagonal unitary exp(i env_phases)
    inside the environment before tracing.
    """

    gamma: np.ndarray
    probe_state: Union[np.ndarray, DensityMatrix]
    convention: HamiltonianConvention = HamiltonianConvention.PROJECTOR11
    gate_order: Optional[Sequence[Tuple[int, int]]] = None
    env_phases: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        gamma = np.array(self.gamma, dtype=float)
        if gamma.ndim != 2:
            raise DimensionError(f"gamma must be a matrix, got shape {gamma.shape}")
        if not np.all(np.isfinite(gamma)):
            raise ValueError("gamma must be finite")
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "convention", HamiltonianConvention(self.convention))
        if self.n_probe + self.n_env > MAX_TOTAL_QUBITS:
            raise OracleBoundError(
                f"{self.n_probe} probes and {self.n_env} environment qubits "
                f"exceed the bound of {MAX_TOTAL_QUBITS}"
            )
        probe_dim = (
            self.probe_state.dim
            if isinstance(self.probe_state, DensityMatrix)
            else np.size(self.probe_state)
        )
        if probe_dim != 2**self.n_probe:
            raise DimensionError(
                f"Probe state of dimension {probe_dim} does not match "
                f"{self.n_probe} probes"
            )
        if self.env_phases is not None and np.size(self.env_phases) != 2**self.n_env:
            raise DimensionError(
                f"env_phases needs {2 ** self.n_env} entries, "
                f"got {np.size(self.env_phases)}"
            )

    @property
    def n_probe(self) -> int:
        return self.gamma.shape[0]

    @property
    def n_env(self) -> int:
        return self.gamma.shape[1]


def _initial_state(spec: FullStateSpec) -> np.ndarray:
    """Joint state as an array indexed (probe, ancilla, environment)."""
    if isinstance(spec.probe_state, DensityMatrix):
        weights, vectors = np.linalg.eigh(spec.probe_state.entries)
        probe = vectors * np.sqrt(np.clip(weights, 0.0, None))[None, :]
    else:
        psi = np.asarray(spec.probe_state, dtype=complex).ravel()
        probe = (psi / np.linalg.norm(psi))[:, None]
    env = np.full(2**spec.n_env, 2 ** (-spec.n_env / 2), dtype=complex)
    return probe[:, :, None] * env[None, None, :]


def _gate_phase(
    probe_bits: np.ndarray,
    env_bits: np.ndarray,
    phi: float,
    convention: HamiltonianConvention,
) -> np.ndarray:
    """Diagonal of the (probe k, environment l) gate on the index grid:
    e^{+i phi} on |1>_k |1>_l for Projector11, exp(-i phi Z_k Z_l) for
    IsingZZ."""
    if convention == HamiltonianConvention.PROJECTOR11:
        return np.exp(1j * phi * np.outer(probe_bits, env_bits))
    z_probe = 1.0 - 2.0 * probe_bits
    z_env = 1.0 - 2.0 * env_bits
    return np.exp(-1j * phi * np.outer(z_probe, z_env))


def full_evolve_and_trace(spec: FullStateSpec) -> DensityMatrix:
    """Evolve the full probe and environment state and trace out the
    environment.

    :param spec: phases, probe state and options
    :type spec: FullStateSpec
    :return: reduced probe state
    :rtype: DensityMatrix
    """
    state = _initial_state(spec)
    probe_bits = basis_bits(spec.n_probe).astype(float)
    env_bits = basis_bits(spec.n_env).astype(float)
    if spec.gate_order is None:
        order = [(k, l) for k in range(spec.n_probe) for l in range(spec.n_env)]
    else:
        order = list(spec.gate_order)
    for k, l in order:
        phi = spec.gamma[k, l]
        if phi == 0:
            continue
        phase = _gate_phase(probe_bits[:, k], env_bits[:, l], phi, spec.convention)
        state = state * phase[:, None, :]
    if spec.env_phases is not None:
        env_phase = np.exp(1j * np.asarray(spec.env_phases, dtype=float))
        state = state * env_phase[None, None, :]
    rho = np.einsum("ajb,cjb->ac", state, state.conj())
    rho = (rho + rho.conj().T) / 2
    logger.debug(
        f"Oracle evolved {spec.n_probe} probes with {spec.n_env} environment qubits"
    )
    return DensityMatrix(rho / np.trace(rho).real)
