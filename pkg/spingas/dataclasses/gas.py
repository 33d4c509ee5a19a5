import math
from dataclasses import dataclass, field, fields, replace
from enum import Enum
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from spingas.utils import ConfigurationError

Site = Tuple[int, int]


class Boundary(str, Enum):
    PERIODIC = "periodic"
    REFLECTING = "reflecting"


@dataclass(frozen=True)
class GasConfig:
    """Parameters of a lattice gas and of the probes immersed in it.

    Times are in the same unit as 1/eta; phases are in radians. The lattice
    has `M` rows and `M_long` columns (square unless `M_long` is given); moving
    probes travel along the column axis.
    """

    M: int
    N_env: int
    eta: float
    g0: float
    duration: float
    probe_sites: Tuple[Site, ...]
    dt: Optional[float] = None
    snapshot_times: Optional[Tuple[float, ...]] = None
    probe_speed: float = 0.0
    crossing_phase: float = 0.1
    boundary: Boundary = Boundary.PERIODIC
    seed: int = 0
    M_long: Optional[int] = None
    # accumulate probe-probe phases (static probes on neighbouring sites)
    probe_probe: bool = False
    # set when dt was derived from eta rather than given
    dt_from_eta: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        # normalize container types so that equality and hashing behave
        object.__setattr__(
            self,
            "probe_sites",
            tuple((int(r), int(c)) for r, c in self.probe_sites),
        )
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        if self.M_long is None:
            object.__setattr__(self, "M_long", self.M)
        if self.dt is None:
            default_dt = 0.1 / self.eta if self.eta > 0 else 0.1
            object.__setattr__(self, "dt", default_dt)
            object.__setattr__(self, "dt_from_eta", True)
        if self.snapshot_times is None:
            object.__setattr__(self, "snapshot_times", (float(self.duration),))
        else:
            object.__setattr__(
                self, "snapshot_times", tuple(float(t) for t in self.snapshot_times)
            )

    @property
    def n_probes(self) -> int:
        return len(self.probe_sites)

    @property
    def shape(self) -> Tuple[int, int]:
        assert self.M_long is not None
        return (self.M, self.M_long)

    @property
    def n_sites(self) -> int:
        return self.shape[0] * self.shape[1]

    @property
    def moving(self) -> bool:
        return self.probe_speed > 0

    @property
    def hop_probability(self) -> float:
        assert self.dt is not None
        return self.eta * self.dt

    @property
    def n_steps(self) -> int:
        assert self.dt is not None
        if self.dt == 0:
            return 0
        return int(round(self.duration / self.dt))

    @property
    def snapshot_steps(self) -> Tuple[int, ...]:
        """Step index at which each snapshot is recorded."""
        assert self.dt is not None and self.snapshot_times is not None
        if self.dt == 0:
            return tuple(0 for _ in self.snapshot_times)
        return tuple(int(round(t / self.dt)) for t in self.snapshot_times)

    def with_values(self, **changes: Any) -> "GasConfig":
        """Copy of this config with some fields replaced. Derived defaults
        (dt, a square lattice's length) follow the fields they derive from;
        a dt given explicitly is kept."""
        if "dt" in changes:
            changes["dt_from_eta"] = False
        elif "eta" in changes and self.dt_from_eta:
            changes["dt"] = None
        if "M" in changes and "M_long" not in changes and self.M_long == self.M:
            changes["M_long"] = None
        return replace(self, **changes)

    def validate(self, prefix: str = "gas") -> "GasConfig":
        """Check the configuration invariants.

        :param prefix: key path prefix used in error messages
        :type prefix: str
        :raises ConfigurationError: naming the offending key
        :return: this configuration
        :rtype: GasConfig
        """

        def fail(key: str, message: str):
            raise ConfigurationError(f"{prefix}.{key}", message)

        if self.M < 1:
            fail("M", f"lattice side must be positive, got {self.M}")
        if self.M_long is None or self.M_long < 1:
            fail("M_long", f"lattice length must be positive, got {self.M_long}")
        if self.N_env < 0:
            fail("N_env", f"particle count must be non-negative, got {self.N_env}")
        for key in ("eta", "g0", "dt", "duration", "probe_speed"):
            value = getattr(self, key)
            if not math.isfinite(value) or value < 0:
                fail(key, f"must be finite and non-negative, got {value}")
        if not math.isfinite(self.crossing_phase):
            fail("crossing_phase", "must be finite")
        if self.N_env + self.n_probes > self.n_sites:
            fail(
                "N_env",
                f"{self.N_env} particles and {self.n_probes} probes do not fit "
                f"on {self.n_sites} sites",
            )
        if self.hop_probability > 1 + 1e-12:
            fail("dt", f"eta*dt = {self.hop_probability} exceeds 1")
        rows, cols = self.shape
        for r, c in self.probe_sites:
            if not (0 <= r < rows and 0 <= c < cols):
                fail("probe_sites", f"site {(r, c)} outside the {rows}x{cols} lattice")
        if len(set(self.probe_sites)) != self.n_probes:
            fail("probe_sites", "probe sites must be distinct")
        assert self.snapshot_times is not None
        times = self.snapshot_times
        if any(b < a for a, b in zip(times, times[1:])):
            fail("snapshot_times", "snapshot times must be sorted")
        if any(t < 0 or t > self.duration + 1e-9 for t in times):
            fail("snapshot_times", f"snapshot times must lie in [0, {self.duration}]")
        return self

    def to_dict(self) -> Dict[str, Any]:
        """Canonical, YAML-friendly representation with all defaults filled.
        A dt derived from eta is written as null so that it keeps following
        eta when read back."""
        out: Dict[str, Any] = {}
        for f in fields(self):
            if f.name == "dt_from_eta":
                continue
            value = getattr(self, f.name)
            if f.name == "dt" and self.dt_from_eta:
                value = None
            elif f.name == "probe_sites":
                value = [list(site) for site in value]
            elif f.name == "snapshot_times":
                value = list(value)
            elif isinstance(value, Enum):
                value = value.value
            out[f.name] = value
        return out


@dataclass
class LatticeState:
    """Positions of the environment particles and probes at one time.

    `occupancy[r, c]` holds the id of the environment particle on that site or
    -1. Probe positions are floats: static probes sit on integer sites, moving
    probes carry a continuous coordinate along the column axis.
    """

    occupancy: np.ndarray
    env_positions: np.ndarray
    probe_positions: np.ndarray
    time: float = 0.0
    step: int = 0
    # sites blocked by static probes
    blocked: np.ndarray = field(default_factory=lambda: np.zeros((0, 0), dtype=bool))

    @property
    def n_env(self) -> int:
        return self.env_positions.shape[0]

    def copy(self) -> "LatticeState":
        return LatticeState(
            occupancy=self.occupancy.copy(),
            env_positions=self.env_positions.copy(),
            probe_positions=self.probe_positions.copy(),
            time=self.time,
            step=self.step,
            blocked=self.blocked,
        )

    def probe_sites(self) -> Sequence[Site]:
        """Lattice site currently under each probe."""
        rows, cols = self.occupancy.shape
        return [
            (int(r) % rows, int(math.floor(c)) % cols)
            for r, c in self.probe_positions
        ]

    def check(self) -> None:
        """Assert particle conservation and exclusion."""
        rows, cols = self.occupancy.shape
        pos = self.env_positions
        assert pos.shape == (self.n_env, 2)
        assert np.all((pos[:, 0] >= 0) & (pos[:, 0] < rows))
        assert np.all((pos[:, 1] >= 0) & (pos[:, 1] < cols))
        occupied = self.occupancy >= 0
        assert occupied.sum() == self.n_env, "particle number not conserved"
        ids = self.occupancy[pos[:, 0], pos[:, 1]]
        assert np.array_equal(ids, np.arange(self.n_env)), "occupancy inconsistent"
        if self.blocked.size:
            assert not np.any(occupied & self.blocked), "particle on a probe site"
        assert np.all(
            (self.probe_positions[:, 1] >= 0) & (self.probe_positions[:, 1] < cols)
        )
