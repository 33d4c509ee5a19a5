import logging
import os
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

BitVector = Union[str, Sequence[int]]


class DimensionError(ValueError):
    """Raised when array, bit-vector or partition sizes do not agree."""


class ConfigurationError(ValueError):
    """Raised when a configuration value is missing, ill-typed or violates a
    constraint. `key_path` names the offending key (e.g. "gas.eta")."""

    def __init__(self, key_path: str, message: str):
        self.key_path = key_path
        self.message = message
        super().__init__(f"{key_path}: {message}" if key_path else message)


def setup_logging(log_level=logging.WARNING, log_file: str = "SpinGas.log"):
    """Create log file with DEBUG level and stdout handler with specified
    logging level.

    :param log_level: logging level of detail
    :type log_level: int
    :param log_file: name of the log file created in the working directory
    :type log_file: str
    """
    root_logger = logging.getLogger()
    root_logger.setLevel(logging.DEBUG)
    formatter = logging.Formatter(
        "%(asctime)s | %(name)s |  %(levelname)s: %(message)s"
    )

    log_file_handler = logging.FileHandler(
        os.path.join(os.getcwd(), log_file), mode="w"
    )
    log_file_handler.setLevel(logging.DEBUG)
    log_file_handler.setFormatter(formatter)

    # numba's compiler is chatty at DEBUG
    logging.getLogger("numba").setLevel(logging.WARN)

    stream_handler = logging.StreamHandler()
    stream_handler.setLevel(log_level)
    stream_handler.setFormatter(formatter)

    root_logger.addHandler(log_file_handler)
    root_logger.addHandler(stream_handler)


def as_bits(s: BitVector, n_qubits: int) -> np.ndarray:
    """Normalize a bit vector given as a string ("0110") or a sequence of
    0/1 integers. Qubit 0 is the leftmost entry.

    :param s: the bit vector
    :type s: BitVector
    :param n_qubits: expected length
    :type n_qubits: int
    :raises DimensionError: if the length does not match
    :return: int8 array of length n_qubits
    :rtype: np.ndarray
    """
    if isinstance(s, str):
        bits = np.array([int(c) for c in s], dtype=np.int8)
    else:
        bits = np.asarray(s, dtype=np.int8).ravel()
    if bits.shape[0] != n_qubits:
        raise DimensionError(
            f"Bit vector {s!r} has length {bits.shape[0]}, expected {n_qubits}"
        )
    if np.any((bits != 0) & (bits != 1)):
        raise ValueError(f"Bit vector {s!r} must contain only 0 and 1")
    return bits


def bits_to_index(bits: np.ndarray) -> int:
    """Computational-basis index of a bit vector (qubit 0 is the most
    significant bit)."""
    index = 0
    for b in bits:
        index = (index << 1) | int(b)
    return index


@lru_cache(maxsize=16)
def basis_bits(n_qubits: int) -> np.ndarray:
    """(2^n, n) table of the bits of every computational basis index."""
    indices = np.arange(2**n_qubits)
    shifts = np.arange(n_qubits - 1, -1, -1)
    table = ((indices[:, None] >> shifts[None, :]) & 1).astype(np.int8)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=16)
def walsh_matrix(n_qubits: int) -> np.ndarray:
    """W[s, m] = (-1)^popcount(s & m): the eigenvalue of the Z-string with
    support mask m on basis state s."""
    bits = basis_bits(n_qubits).astype(np.int64)
    parity = (bits @ bits.T) & 1
    table = (1 - 2 * parity).astype(float)
    table.setflags(write=False)
    return table


def n_qubits_of(dim: int) -> int:
    """Number of qubits for a Hilbert-space dimension, which must be a power of
    two."""
    n = int(dim).bit_length() - 1
    if dim < 1 or 2**n != dim:
        raise DimensionError(f"Dimension {dim} is not a power of two")
    return n
