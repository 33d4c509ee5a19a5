"""Monte Carlo ensembles of collision histories.

Every realization is a pure function of (master seed, sweep index,
realization index), so realizations can run in any order and in any number
of worker processes; reductions always run in realization-index order.
"""
import logging
from dataclasses import dataclass
from functools import partial
from multiprocessing import Pool
from typing import Iterable, List, Optional

import numpy as np

from spingas.dataclasses.density_matrix import DensityMatrix, HamiltonianConvention
from spingas.dataclasses.gas import GasConfig
from spingas.dataclasses.run import (
    EnsembleResult,
    Observables,
    ResultRow,
    RunSpec,
    SweepValue,
)
from spingas.decoherence import (
    apply_decoherence,
    apply_intra_probe_phases,
    coherence_factor,
    intra_probe_unitary,
)
from spingas.entanglement import concurrence, negativity_summary
from spingas.kinematics import simulate
from spingas.states import make_state
from spingas.utils import as_bits, bits_to_index

logger = logging.getLogger(__name__)

MAX_BATCHES = 20


class RealizationError(RuntimeError):
    """A numerical failure inside one realization; aborts the run."""

    def __init__(self, sweep_index: int, realization_index: int, message: str):
        self.sweep_index = sweep_index
        self.realization_index = realization_index
        self.message = message
        super().__init__(
            f"Realization {realization_index} of sweep value {sweep_index} "
            f"failed: {message}"
        )

    def __reduce__(self):
        return (
            self.__class__,
            (self.sweep_index, self.realization_index, self.message),
        )


def realization_stream(
    master_seed: int, sweep_index: int, realization_index: int
) -> np.random.Generator:
    """Independent random stream of one realization."""
    seed = np.random.SeedSequence(
        master_seed, spawn_key=(sweep_index, realization_index)
    )
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class RealizationTask:
    """What a worker needs to run the realizations of one ensemble."""

    gas: GasConfig
    rho0: DensityMatrix
    observables: Observables
    convention: HamiltonianConvention
    master_seed: int
    sweep_index: int
    check_invariants: bool = False


@dataclass
class RealizationOutcome:
    """Per-snapshot observables of one realization.

    `coherences[t, p]` is the coherence multiplier of the p-th configured
    pair; `states[t]` the probe density matrix.
    """

    coherences: np.ndarray
    states: Optional[np.ndarray] = None
    concurrence: Optional[np.ndarray] = None
    negativity: Optional[np.ndarray] = None


def _observe(task: RealizationTask, index: int) -> RealizationOutcome:
    rng = realization_stream(task.master_seed, task.sweep_index, index)
    histories = simulate(task.gas, rng, check_invariants=task.check_invariants)
    n = task.rho0.n_qubits
    pairs = [
        (bits_to_index(as_bits(s, n)), bits_to_index(as_bits(t, n)), s, t)
        for s, t in task.observables.coherences
    ]
    n_times = len(histories)
    outcome = RealizationOutcome(coherences=np.ones((n_times, len(pairs)), complex))
    if task.observables.needs_state:
        outcome.states = np.empty((n_times, task.rho0.dim, task.rho0.dim), complex)
    if task.observables.concurrence:
        outcome.concurrence = np.empty(n_times)
    if task.observables.negativity_summary:
        outcome.negativity = np.empty((n_times, 2))

    for t, history in enumerate(histories):
        u = None
        if task.gas.probe_probe:
            u = intra_probe_unitary(history.gamma_AA, task.convention, n)
        for p, (i, j, s, s_prime) in enumerate(pairs):
            c = coherence_factor(history, s, s_prime, task.convention)
            if u is not None:
                c *= u[i] * np.conj(u[j])
            outcome.coherences[t, p] = c
        if not task.observables.needs_state:
            continue
        rho = apply_decoherence(task.rho0, history, task.convention)
        if task.gas.probe_probe:
            rho = apply_intra_probe_phases(rho, history.gamma_AA, task.convention)
        if task.check_invariants:
            rho.validate()
        elif not np.all(np.isfinite(rho.entries)):
            raise FloatingPointError(f"non-finite state at t={history.time}")
        outcome.states[t] = rho.entries  # type: ignore
        if outcome.concurrence is not None:
            outcome.concurrence[t] = concurrence(rho)
        if outcome.negativity is not None:
            summary = negativity_summary(rho)
            outcome.negativity[t] = (summary.average, summary.minimum)
    if not np.all(np.isfinite(outcome.coherences)):
        raise FloatingPointError("non-finite coherence multiplier")
    return outcome


def run_realization(task: RealizationTask, index: int) -> RealizationOutcome:
    """Simulate one collision history and evaluate the observables at every
    snapshot.

    :raises RealizationError: carrying the sweep and realization index
    """
    try:
        return _observe(task, index)
    except RealizationError:
        raise
    except Exception as e:
        raise RealizationError(task.sweep_index, index, repr(e)) from e


def _stderr(values: np.ndarray, axis: int = 0) -> np.ndarray:
    count = values.shape[axis]
    if count < 2:
        return np.zeros(np.delete(values.shape, axis))
    return np.std(values, axis=axis, ddof=1) / np.sqrt(count)


class EnsembleAccumulator:
    """Collects realization outcomes in index order and reduces them to
    means and standard errors.

    Averaged-state observables are evaluated on the mean density matrix;
    their error comes from the spread over contiguous batches of
    realizations.
    """

    def __init__(
        self, observables: Observables, n_times: int, dim: int, realizations: int
    ):
        self.observables = observables
        self.realizations = realizations
        n_pairs = len(observables.coherences)
        self.coherences = np.empty((realizations, n_times, n_pairs), complex)
        self.concurrence = np.empty((realizations, n_times))
        self.negativity = np.empty((realizations, n_times, 2))
        n_batches = min(realizations, MAX_BATCHES)
        self.batches = np.array_split(np.arange(realizations), n_batches)
        self.batch_of = np.empty(realizations, dtype=np.int64)
        for b, members in enumerate(self.batches):
            self.batch_of[members] = b
        self.batch_sums: Optional[np.ndarray] = None
        if observables.needs_state:
            self.batch_sums = np.zeros((n_batches, n_times, dim, dim), complex)
        self.count = 0

    def add(self, index: int, outcome: RealizationOutcome):
        if index != self.count:
            raise ValueError(f"Outcome {index} added out of order")
        self.coherences[index] = outcome.coherences
        if outcome.concurrence is not None:
            self.concurrence[index] = outcome.concurrence
        if outcome.negativity is not None:
            self.negativity[index] = outcome.negativity
        if self.batch_sums is not None and outcome.states is not None:
            self.batch_sums[self.batch_of[index]] += outcome.states
        self.count += 1

    def _state_measure(self, measure, t: int):
        """(value on the mean state, batch standard error) at snapshot t."""
        assert self.batch_sums is not None
        mean_state = self.batch_sums[:, t].sum(axis=0) / self.realizations
        value = measure(DensityMatrix(mean_state))
        batch_values = np.array(
            [
                measure(DensityMatrix(self.batch_sums[b, t] / len(members)))
                for b, members in enumerate(self.batches)
            ]
        )
        return value, _stderr(batch_values)

    def rows(
        self,
        sweep_param: str,
        sweep_value: Optional[SweepValue],
        times: Iterable[float],
    ) -> List[ResultRow]:
        if self.count != self.realizations:
            raise ValueError(
                f"Only {self.count} of {self.realizations} realizations collected"
            )
        R = self.realizations
        obs = self.observables
        labels = [f"[{s},{t}]" for s, t in obs.coherences]

        magnitude = np.abs(self.coherences)
        mag_mean, mag_err = magnitude.mean(axis=0), _stderr(magnitude)
        coherence_mean = self.coherences.mean(axis=0)
        state_coherence = np.abs(coherence_mean)
        safe = np.where(state_coherence > 0, state_coherence, 1.0)
        direction = np.where(state_coherence > 0, coherence_mean / safe, 1.0)
        projected = np.real(self.coherences * np.conj(direction)[None])
        state_coherence_err = _stderr(projected)

        rows: List[ResultRow] = []

        def row(time: float, name: str, mean: float, stderr: float):
            rows.append(
                ResultRow(
                    sweep_param,
                    sweep_value,
                    float(time),
                    name,
                    float(mean),
                    float(stderr),
                    R,
                )
            )

        def summary_average(rho: DensityMatrix) -> float:
            return negativity_summary(rho).average

        def summary_minimum(rho: DensityMatrix) -> float:
            return negativity_summary(rho).minimum

        for t, time in enumerate(times):
            for p, label in enumerate(labels):
                row(time, f"coherence{label}", mag_mean[t, p], mag_err[t, p])
            for p, label in enumerate(labels):
                row(
                    time,
                    f"state_coherence{label}",
                    state_coherence[t, p],
                    state_coherence_err[t, p],
                )
            if obs.concurrence:
                values = self.concurrence[:, t]
                row(time, "concurrence", values.mean(), _stderr(values))
                row(time, "state_concurrence", *self._state_measure(concurrence, t))
            if obs.negativity_summary:
                for k, name in enumerate(("negativity_avg", "negativity_min")):
                    values = self.negativity[:, t, k]
                    row(time, name, values.mean(), _stderr(values))
                row(
                    time,
                    "state_negativity_avg",
                    *self._state_measure(summary_average, t),
                )
                row(
                    time,
                    "state_negativity_min",
                    *self._state_measure(summary_minimum, t),
                )
        return rows


def run_ensemble(spec: RunSpec, workers: Optional[int] = None) -> EnsembleResult:
    """Average observables over independent collision histories, for every
    value of the optional sweep.

    :param spec: run specification; validated before any simulation starts
    :type spec: RunSpec
    :param workers: number of worker processes, defaults to `spec.workers`
    :type workers: Optional[int]
    :raises ConfigurationError: if the specification is invalid
    :raises RealizationError: if a realization fails numerically
    :return: one row per (sweep value, snapshot time, observable)
    :rtype: EnsembleResult
    """
    spec.validate()
    workers = spec.workers if workers is None else workers
    rho0 = make_state(spec.state)
    sweep_param = "" if spec.sweep is None else spec.sweep.parameter.value
    result = EnsembleResult()

    for sweep_index, (sweep_value, gas) in enumerate(spec.gas_configs()):
        assert gas.snapshot_times is not None
        task = RealizationTask(
            gas=gas,
            rho0=rho0,
            observables=spec.observables,
            convention=spec.convention,
            master_seed=spec.master_seed,
            sweep_index=sweep_index,
            check_invariants=spec.check_invariants,
        )
        logger.info(
            f"Running {spec.realizations} realizations"
            + ("" if sweep_value is None else f" at {sweep_param}={sweep_value}")
            + f" with {workers} worker(s)"
        )
        accumulator = EnsembleAccumulator(
            spec.observables, len(gas.snapshot_times), rho0.dim, spec.realizations
        )
        func = partial(run_realization, task)
        indices = range(spec.realizations)
        if workers == 1:
            for i, outcome in zip(indices, map(func, indices)):
                accumulator.add(i, outcome)
        else:
            chunksize = max(1, spec.realizations // (4 * workers))
            with Pool(processes=workers) as pool:
                for i, outcome in zip(indices, pool.imap(func, indices, chunksize)):
                    accumulator.add(i, outcome)
        result.extend(accumulator.rows(sweep_param, sweep_value, gas.snapshot_times))
        logger.debug(f"Finished sweep index {sweep_index}")
    return result
