from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from spingas.dataclasses.density_matrix import HamiltonianConvention
from spingas.dataclasses.gas import GasConfig
from spingas.states import StateSpec
from spingas.utils import ConfigurationError

SweepValue = Union[int, float]


class SweepParameter(str, Enum):
    PROBE_DISTANCE = "probe_distance"
    PROBE_SPEED = "probe_speed"
    G0 = "g0"
    ETA = "eta"
    M = "M"
    N_ENV = "N_env"


INTEGER_SWEEPS = {SweepParameter.PROBE_DISTANCE, SweepParameter.M, SweepParameter.N_ENV}


@dataclass(frozen=True)
class Sweep:
    """A list of values for one gas parameter; every value is run as a
    separate ensemble."""

    parameter: SweepParameter
    values: Tuple[SweepValue, ...]

    def __post_init__(self):
        try:
            object.__setattr__(self, "parameter", SweepParameter(self.parameter))
        except ValueError:
            names = ", ".join(p.value for p in SweepParameter)
            raise ConfigurationError(
                "sweep.parameter",
                f"Unknown parameter {self.parameter!r}; expected one of {names}",
            )
        object.__setattr__(self, "values", tuple(self.values))

    def apply(self, gas: GasConfig, value: SweepValue) -> GasConfig:
        """The gas configuration with the swept parameter set to `value`.

        A probe distance d places the probes on a line along the column
        axis, d sites apart, starting from the first configured probe.
        """
        if self.parameter == SweepParameter.PROBE_DISTANCE:
            if not gas.probe_sites:
                raise ConfigurationError("sweep.parameter", "no probes to place")
            row, col = gas.probe_sites[0]
            sites = tuple(
                (row, col + j * int(value)) for j in range(gas.n_probes)
            )
            return gas.with_values(probe_sites=sites)
        if self.parameter in INTEGER_SWEEPS:
            value = int(value)
        return gas.with_values(**{self.parameter.value: value})

    def validate(self, gas: GasConfig) -> "Sweep":
        if not self.values:
            raise ConfigurationError("sweep.values", "must not be empty")
        for i, value in enumerate(self.values):
            key = f"sweep.values.{i}"
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigurationError(key, f"expected a number, got {value!r}")
            if self.parameter in INTEGER_SWEEPS and value != int(value):
                raise ConfigurationError(
                    key, f"{self.parameter.value} needs integers, got {value}"
                )
            try:
                self.apply(gas, value).validate()
            except ConfigurationError as e:
                raise ConfigurationError(key, f"{value} gives {e}")
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {"parameter": self.parameter.value, "values": list(self.values)}


@dataclass(frozen=True)
class Observables:
    """Which quantities are evaluated at each snapshot.

    `coherences` lists basis-state pairs (s, s') as bit strings.
    """

    coherences: Tuple[Tuple[str, str], ...] = ()
    concurrence: bool = False
    negativity_summary: bool = False

    def __post_init__(self):
        object.__setattr__(
            self, "coherences", tuple((str(s), str(t)) for s, t in self.coherences)
        )

    def __bool__(self) -> bool:
        return bool(self.coherences) or self.concurrence or self.negativity_summary

    @property
    def needs_state(self) -> bool:
        return self.concurrence or self.negativity_summary

    def names(self) -> List[str]:
        """Output names in the order rows are emitted."""
        names: List[str] = []
        for s, t in self.coherences:
            names.append(f"coherence[{s},{t}]")
        for s, t in self.coherences:
            names.append(f"state_coherence[{s},{t}]")
        if self.concurrence:
            names += ["concurrence", "state_concurrence"]
        if self.negativity_summary:
            names += [
                "negativity_avg",
                "negativity_min",
                "state_negativity_avg",
                "state_negativity_min",
            ]
        return names

    def to_dict(self) -> Dict[str, Any]:
        return {
            "coherences": [[s, t] for s, t in self.coherences],
            "concurrence": self.concurrence,
            "negativity_summary": self.negativity_summary,
        }


@dataclass(frozen=True)
class RunSpec:
    """Everything needed to run and record one ensemble experiment."""

    gas: GasConfig
    state: StateSpec
    observables: Observables
    convention: HamiltonianConvention = HamiltonianConvention.PROJECTOR11
    realizations: int = 1000
    master_seed: int = 0
    output_path: Optional[str] = None
    sweep: Optional[Sweep] = None
    workers: int = 1
    # assert lattice and density-matrix invariants in every realization
    check_invariants: bool = False

    def __post_init__(self):
        object.__setattr__(self, "convention", HamiltonianConvention(self.convention))

    def validate(self) -> "RunSpec":
        """
        :raises ConfigurationError: naming the first offending key
        """
        self.gas.validate("gas")
        self.state.validate("state")
        n = self.state.n_qubits
        if self.gas.n_probes != n:
            raise ConfigurationError(
                "state.n_qubits",
                f"{n} qubits but {self.gas.n_probes} probe sites in gas.probe_sites",
            )
        if not self.observables:
            raise ConfigurationError("run.observables", "at least one is required")
        for i, (s, t) in enumerate(self.observables.coherences):
            for bits in (s, t):
                if len(bits) != n or set(bits) - {"0", "1"}:
                    raise ConfigurationError(
                        f"run.observables.coherences.{i}",
                        f"{bits!r} is not a {n}-bit string",
                    )
        if self.observables.concurrence and n != 2:
            raise ConfigurationError(
                "run.observables.concurrence", f"needs 2 qubits, got {n}"
            )
        if self.observables.negativity_summary and n < 2:
            raise ConfigurationError(
                "run.observables.negativity_summary", "needs at least 2 qubits"
            )
        if self.realizations < 1:
            raise ConfigurationError(
                "run.realizations", f"must be at least 1, got {self.realizations}"
            )
        if self.workers < 1:
            raise ConfigurationError(
                "run.workers", f"must be at least 1, got {self.workers}"
            )
        if not 0 <= self.master_seed < 2**64:
            raise ConfigurationError(
                "run.master_seed", "must be an unsigned 64-bit integer"
            )
        if self.sweep is not None:
            self.sweep.validate(self.gas)
        return self

    def gas_configs(self) -> List[Tuple[Optional[SweepValue], GasConfig]]:
        """(sweep value, gas configuration) for every ensemble of the run."""
        if self.sweep is None:
            return [(None, self.gas)]
        return [(v, self.sweep.apply(self.gas, v)) for v in self.sweep.values]

    def to_dict(self) -> Dict[str, Any]:
        """Canonical document with the `gas`, `state`, `run` and `sweep`
        sections."""
        run: Dict[str, Any] = {}
        for f in fields(self):
            if f.name in ("gas", "state", "sweep"):
                continue
            value = getattr(self, f.name)
            if isinstance(value, Enum):
                value = value.value
            elif isinstance(value, Observables):
                value = value.to_dict()
            run[f.name] = value
        return {
            "gas": self.gas.to_dict(),
            "state": self.state.to_dict(),
            "run": run,
            "sweep": None if self.sweep is None else self.sweep.to_dict(),
        }


@dataclass(frozen=True)
class ResultRow:
    sweep_param: str
    sweep_value: Optional[SweepValue]
    time: float
    observable: str
    mean: float
    stderr: float
    realizations: int


@dataclass
class EnsembleResult:
    """Rows of (sweep value, time, observable) statistics."""

    rows: List[ResultRow] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def observables(self) -> List[str]:
        return list(dict.fromkeys(row.observable for row in self.rows))

    @property
    def sweep_values(self) -> List[Optional[SweepValue]]:
        return list(dict.fromkeys(row.sweep_value for row in self.rows))

    def series(
        self, observable: str, sweep_value: Optional[SweepValue] = None
    ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(times, means, standard errors) of one observable, in time order.

        :raises KeyError: if no row matches
        """
        rows = [
            r
            for r in self.rows
            if r.observable == observable and r.sweep_value == sweep_value
        ]
        if not rows:
            raise KeyError(f"No rows for {observable!r} at sweep value {sweep_value}")
        rows.sort(key=lambda r: r.time)
        return (
            np.array([r.time for r in rows]),
            np.array([r.mean for r in rows]),
            np.array([r.stderr for r in rows]),
        )

    def extend(self, rows: Sequence[ResultRow]):
        self.rows.extend(rows)
