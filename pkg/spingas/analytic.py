"""Closed-form reference models for coherence and entanglement decay.

These are used as oracles for the simulation and as fit targets for
finite-size revival data.
"""
import logging
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np
from scipy.optimize import brentq, least_squares
from scipy.special import comb

from spingas.states import StateFamily

logger = logging.getLogger(__name__)

ArrayLike = Union[float, Sequence[float], np.ndarray]


def _scalar_or_array(value: np.ndarray):
    return float(value) if np.ndim(value) == 0 else value


@dataclass(frozen=True)
class DecayScales:
    """Exponential (tau_e) and Gaussian (tau_g) decay times for collisions
    of phase `delta_phi` every `delta_t`."""

    tau_e: float
    tau_g: float
    delta_phi: float
    delta_t: float

    @classmethod
    def from_collisions(cls, delta_phi: float, delta_t: float) -> "DecayScales":
        if delta_phi == 0:
            return cls(np.inf, np.inf, delta_phi, delta_t)
        return cls(
            tau_e=8 * delta_t / delta_phi**2,
            tau_g=2 * delta_t / abs(delta_phi),
            delta_phi=delta_phi,
            delta_t=delta_t,
        )


@dataclass(frozen=True)
class RevivalModel:
    """Finite-lattice revival model.

    After `s` steps each probe/particle pair has collided n = 4s/M^2 times
    on average, each collision adding `delta_phi`. The variance
    coefficients alpha, alpha' and alpha'' are fit parameters.
    """

    s: float
    M: int
    delta_phi: float
    N_A: int
    N_B: int
    alpha: float = 0.0
    alpha_prime: float = 0.0
    alpha_double_prime: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "alpha_prime", "alpha_double_prime"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.M <= 0:
            raise ValueError(f"M must be positive, got {self.M}")

    @property
    def n(self) -> float:
        return 4 * self.s / self.M**2


def markov_coherence(nu: float, delta_phi: float, steps: ArrayLike):
    """|C_{00,11}| of two probes that each meet a fresh environment particle
    with probability `nu` per step:
    |nu e^{i d/2} cos(d/2) + 1 - nu|^(2s).
    """
    if not 0 <= nu <= 1:
        raise ValueError(f"nu must lie in [0, 1], got {nu}")
    base = abs(nu * np.exp(0.5j * delta_phi) * np.cos(delta_phi / 2) + 1 - nu)
    return _scalar_or_array(np.power(base, 2 * np.asarray(steps, dtype=float)))


def exponential_vs_gaussian(
    delta_phi: float, delta_t: float, t: float
) -> Tuple[float, float, DecayScales]:
    """Single-qubit coherence |rho_01| after time t in the two limits.

    Markovian collisions with fresh particles give cos(d/2)^k; repeated
    collisions with the same particle give cos(k d/2). Here k = t/delta_t.
    The Gaussian branch is clamped at 0 once k*d reaches pi.

    :return: (exponential value, Gaussian value, decay scales)
    :rtype: Tuple[float, float, DecayScales]
    """
    scales = DecayScales.from_collisions(delta_phi, delta_t)
    k = t / delta_t
    exp_value = float(abs(np.cos(delta_phi / 2)) ** k)
    if k * abs(delta_phi) >= np.pi:
        logger.warning(
            f"Gaussian branch clamped to 0: {k:g} collisions of phase "
            f"{delta_phi:g} exceed pi"
        )
        gauss_value = 0.0
    else:
        gauss_value = float(np.cos(k * delta_phi / 2))
    return exp_value, gauss_value, scales


def ghz_avg_negativity(p: ArrayLike, N_A: int):
    """Average negativity 1/2 |2p-1|^N_A of a GHZ state under uniform
    single-qubit dephasing."""
    q = np.abs(2 * np.asarray(p, dtype=float) - 1)
    return _scalar_or_array(0.5 * q**N_A)


def ghz_dp_negativities(p: float, N_A: int) -> Tuple[float, float]:
    """(average, minimum) negativity of the GHZ'' state under uniform
    dephasing.

    The minimum belongs to the partition that separates qubit 0,
    1/4 max(0, q + q^(N-1) + q^N - 1) with q = |2p-1|; every other
    partition has 1/2 q^(N-1).
    """
    if N_A < 2:
        raise ValueError(f"N_A must be at least 2, got {N_A}")
    q = abs(2 * p - 1)
    minimum = 0.25 * max(0.0, q + q ** (N_A - 1) + q**N_A - 1)
    n_parts = 2 ** (N_A - 1) - 1
    average = (minimum + (n_parts - 1) * 0.5 * q ** (N_A - 1)) / n_parts
    return float(average), float(minimum)


def ghz_dp_disentangle_p(N_A: int) -> float:
    """The p > 1/2 at which the minimum negativity of the dephased GHZ''
    state reaches zero."""
    if N_A < 2:
        raise ValueError(f"N_A must be at least 2, got {N_A}")
    q = brentq(lambda x: x + x ** (N_A - 1) + x**N_A - 1, 0.0, 1.0, xtol=1e-15)
    return float((1 + q) / 2)


def w_avg_negativity(p: ArrayLike, N_A: int):
    """Average negativity of a W state under uniform dephasing,
    q^2/(N(2^N - 2)) sum_a C(N, a) sqrt(a(N-a)) with q = |2p-1|."""
    if N_A < 2:
        raise ValueError(f"N_A must be at least 2, got {N_A}")
    a = np.arange(1, N_A)
    weight = np.sum(comb(N_A, a) * np.sqrt(a * (N_A - a))) / (N_A * (2**N_A - 2))
    q = np.abs(2 * np.asarray(p, dtype=float) - 1)
    return _scalar_or_array(weight * q**2)


def _revival_curve(
    n: np.ndarray,
    delta_phi: float,
    N_A: int,
    N_B: int,
    family: StateFamily,
    alpha: float,
) -> np.ndarray:
    if family == StateFamily.GHZ:
        single = np.cos(2 * N_A * n * delta_phi) * np.exp(
            -8 * alpha * N_A * n * delta_phi**2
        )
    elif family == StateFamily.W:
        single = np.exp(-16 * alpha * n * delta_phi**2)
    else:
        raise ValueError(f"No revival model for {family.value}")
    return np.power(single, N_B)


def revival_coherence(model: RevivalModel, family: StateFamily) -> float:
    """Ensemble-averaged extreme coherence on a finite lattice.

    GHZ: [cos(2 N_A n d) exp(-8 alpha' N_A n d^2)]^N_B.
    W: [exp(-16 alpha'' n d^2)]^N_B, whose mean phase vanishes.
    """
    family = StateFamily(family)
    alpha = model.alpha_prime if family == StateFamily.GHZ else model.alpha_double_prime
    value = _revival_curve(
        np.asarray(model.n), model.delta_phi, model.N_A, model.N_B, family, alpha
    )
    return float(value)


def revival_time(M: int, n_probes: int, delta_phi: float, step_time: float) -> float:
    """Time of the first GHZ revival, when 2 N_A n delta_phi = 2 pi."""
    steps = np.pi * M**2 / (4 * n_probes * delta_phi)
    return float(steps * step_time)


@dataclass(frozen=True)
class FitResult:
    alpha: float
    residual: float


def fit_revival(
    model: RevivalModel,
    steps: Sequence[float],
    observed: Sequence[float],
    family: StateFamily,
) -> FitResult:
    """Fit alpha' (GHZ) or alpha'' (W) of `model` to an observed coherence
    series by bounded least squares.

    :param model: lattice and collision parameters; its `s` and alpha
        fields are ignored
    :type model: RevivalModel
    :param steps: step counts of the observations
    :type steps: Sequence[float]
    :param observed: observed coherence at each step
    :type observed: Sequence[float]
    :param family: GHZ or W
    :type family: StateFamily
    :return: the fitted coefficient and the relative L2 residual
    :rtype: FitResult
    """
    family = StateFamily(family)
    steps = np.asarray(steps, dtype=float)
    observed = np.asarray(observed, dtype=float)
    if steps.shape != observed.shape or steps.size == 0:
        raise ValueError("steps and observed must be nonempty and of equal length")
    n = 4 * steps / model.M**2

    def residuals(x: np.ndarray) -> np.ndarray:
        curve = _revival_curve(
            n, model.delta_phi, model.N_A, model.N_B, family, float(x[0])
        )
        return curve - observed

    solution = least_squares(residuals, x0=[1.0], bounds=([0.0], [np.inf]))
    norm = np.linalg.norm(observed)
    residual = float(np.linalg.norm(solution.fun) / norm) if norm > 0 else 0.0
    logger.info(
        f"Fitted {family.value} revival: alpha={solution.x[0]:.4g}, "
        f"residual={residual:.3g}"
    )
    return FitResult(float(solution.x[0]), residual)


def fit_collision_variance(counts: Sequence[float], n: float) -> float:
    """Estimate alpha from sigma^2 = alpha n, given collision counts with
    mean n."""
    if n <= 0:
        raise ValueError(f"Mean collision count must be positive, got {n}")
    counts = np.asarray(counts, dtype=float)
    if counts.size < 2:
        raise ValueError("Need at least two collision counts")
    return float(np.var(counts, ddof=1) / n)


def correlated_pair_coherences(
    gamma_1: Sequence[float], delta: Sequence[float]
) -> Tuple[float, float]:
    """|C_{01,10}| and |C_{00,11}| for two probes whose phases differ by
    `delta` (Gamma_2 = Gamma_1 + delta).

    The first depends only on the difference; the second adds the phases
    and is super-damped as delta shrinks.
    """
    gamma_1 = np.asarray(gamma_1, dtype=float)
    delta = np.asarray(delta, dtype=float)
    if gamma_1.shape != delta.shape:
        raise ValueError("gamma_1 and delta must have the same shape")
    antiparallel = np.prod(np.abs(np.cos(delta / 2)))
    parallel = np.prod(np.abs(np.cos(gamma_1 + delta / 2)))
    return float(antiparallel), float(parallel)
