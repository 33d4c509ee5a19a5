"""Classical lattice-gas dynamics and accumulation of interaction phases.

Environment particles hop between nearest-neighbour sites of a rectangular
lattice with exclusion; static probes occupy (and block) their sites, moving
probes sweep along the column axis without blocking. Each step updates the
interaction history Gamma that drives the quantum evolution.
"""
import logging
import math
from typing import List, Optional, Tuple

import numpy as np
from numba import njit

from spingas.dataclasses.gas import Boundary, GasConfig, LatticeState
from spingas.dataclasses.history import InteractionHistory
from spingas.utils import ConfigurationError

logger = logging.getLogger(__name__)

# (drow, dcol) for the four hop directions
NEIGHBOR_OFFSETS = np.array([[-1, 0], [1, 0], [0, -1], [0, 1]], dtype=np.int64)


@njit(cache=True)
def _hop_kernel(
    occupancy, env_positions, blocked, order, attempt, directions, periodic
):
    rows, cols = occupancy.shape
    for idx in range(order.shape[0]):
        l = order[idx]
        if not attempt[l]:
            continue
        r = env_positions[l, 0]
        c = env_positions[l, 1]
        d = directions[l]
        if d == 0:
            tr, tc = r - 1, c
        elif d == 1:
            tr, tc = r + 1, c
        elif d == 2:
            tr, tc = r, c - 1
        else:
            tr, tc = r, c + 1
        if periodic:
            tr = tr % rows
            tc = tc % cols
        elif tr < 0 or tr >= rows or tc < 0 or tc >= cols:
            continue
        if occupancy[tr, tc] >= 0 or blocked[tr, tc]:
            continue
        occupancy[r, c] = -1
        occupancy[tr, tc] = l
        env_positions[l, 0] = tr
        env_positions[l, 1] = tc


@njit(cache=True)
def _accumulate_static_kernel(gamma, occupancy, neighbor_sites, increment):
    # neighbor_sites[k] lists distinct sites next to probe k, padded with -1
    for k in range(neighbor_sites.shape[0]):
        for j in range(neighbor_sites.shape[1]):
            r = neighbor_sites[k, j, 0]
            if r < 0:
                continue
            l = occupancy[r, neighbor_sites[k, j, 1]]
            if l >= 0:
                gamma[k, l] += increment


def _neighbors(site: Tuple[int, int], config: GasConfig) -> List[Tuple[int, int]]:
    """Distinct nearest-neighbour sites of `site` under the boundary rule."""
    rows, cols = config.shape
    out: List[Tuple[int, int]] = []
    for dr, dc in NEIGHBOR_OFFSETS:
        r, c = site[0] + int(dr), site[1] + int(dc)
        if config.boundary == Boundary.PERIODIC:
            r, c = r % rows, c % cols
        elif not (0 <= r < rows and 0 <= c < cols):
            continue
        if (r, c) != tuple(site) and (r, c) not in out:
            out.append((r, c))
    return out


def _neighbor_table(config: GasConfig) -> np.ndarray:
    table = -np.ones((config.n_probes, 4, 2), dtype=np.int64)
    for k, site in enumerate(config.probe_sites):
        for j, nb in enumerate(_neighbors(site, config)):
            table[k, j] = nb
    return table


def probe_adjacency(config: GasConfig) -> np.ndarray:
    """Symmetric 0/1 matrix marking static probes on neighbouring sites."""
    n = config.n_probes
    adjacency = np.zeros((n, n))
    for j in range(n):
        nbs = _neighbors(config.probe_sites[j], config)
        for k in range(n):
            if k != j and config.probe_sites[k] in nbs:
                adjacency[j, k] = 1.0
    return adjacency


def init_lattice(config: GasConfig, rng: np.random.Generator) -> LatticeState:
    """Place the environment particles uniformly at random on distinct free
    sites and the probes on their configured sites.

    :param config: gas configuration
    :type config: GasConfig
    :param rng: random stream of this trajectory
    :type rng: np.random.Generator
    :raises ConfigurationError: if the particles cannot fit on the lattice
    :return: the initial lattice state at time 0
    :rtype: LatticeState
    """
    rows, cols = config.shape
    if config.N_env + config.n_probes > rows * cols:
        raise ConfigurationError(
            "gas.N_env",
            f"{config.N_env} particles and {config.n_probes} probes do not fit "
            f"on {rows * cols} sites",
        )
    blocked = np.zeros((rows, cols), dtype=np.bool_)
    if not config.moving:
        for r, c in config.probe_sites:
            blocked[r, c] = True
    free = np.flatnonzero(~blocked.ravel())
    chosen = rng.choice(free, size=config.N_env, replace=False)
    env_positions = np.stack(np.divmod(chosen, cols), axis=1).astype(np.int64)
    occupancy = -np.ones((rows, cols), dtype=np.int64)
    occupancy[env_positions[:, 0], env_positions[:, 1]] = np.arange(config.N_env)
    probe_positions = np.array(config.probe_sites, dtype=float).reshape(-1, 2)
    return LatticeState(
        occupancy=occupancy,
        env_positions=env_positions,
        probe_positions=probe_positions,
        time=0.0,
        step=0,
        blocked=blocked,
    )


def _hop_inplace(state: LatticeState, config: GasConfig, rng: np.random.Generator):
    n = state.n_env
    # the same number of draws every step keeps streams aligned across configs
    order = rng.permutation(n)
    attempt = rng.random(n) < config.hop_probability
    directions = rng.integers(0, 4, size=n)
    if n:
        _hop_kernel(
            state.occupancy,
            state.env_positions,
            state.blocked,
            order,
            attempt,
            directions,
            config.boundary == Boundary.PERIODIC,
        )
    if config.moving:
        assert config.dt is not None and config.M_long is not None
        cols = state.probe_positions[:, 1] + config.probe_speed * config.dt
        state.probe_positions[:, 1] = np.mod(cols, config.M_long)
    state.step += 1
    assert config.dt is not None
    state.time = state.step * config.dt


def hop_step(
    state: LatticeState, config: GasConfig, rng: np.random.Generator
) -> LatticeState:
    """Advance the gas by one time step.

    Every environment particle, in a freshly shuffled order, attempts with
    probability eta*dt a hop to a uniformly chosen nearest neighbour; the hop
    is rejected if the target is occupied or blocked by a static probe (or
    falls off a reflecting boundary). Moving probes advance by
    probe_speed*dt along the column axis.

    :param state: current state; not modified
    :type state: LatticeState
    :param config: gas configuration
    :type config: GasConfig
    :param rng: random stream of this trajectory
    :type rng: np.random.Generator
    :return: the state one step later
    :rtype: LatticeState
    """
    new_state = state.copy()
    _hop_inplace(new_state, config, rng)
    return new_state


def _crossed_cells(state: LatticeState, config: GasConfig, k: int) -> List[int]:
    """Columns entered by moving probe k during the last step."""
    assert config.dt is not None and config.M_long is not None
    x_new = state.probe_positions[k, 1]
    x_old = x_new - config.probe_speed * config.dt
    first = math.floor(x_old) + 1
    last = math.floor(x_new)
    return [c % config.M_long for c in range(first, last + 1)]


def _accumulate_inplace(
    gamma: np.ndarray,
    state: LatticeState,
    config: GasConfig,
    neighbor_table: Optional[np.ndarray] = None,
):
    assert config.dt is not None
    if config.moving:
        for k, (row, _) in enumerate(state.probe_sites()):
            for col in _crossed_cells(state, config, k):
                l = state.occupancy[row, col]
                if l >= 0:
                    gamma[k, l] += config.crossing_phase
        return
    if neighbor_table is None:
        neighbor_table = _neighbor_table(config)
    if state.n_env:
        _accumulate_static_kernel(
            gamma, state.occupancy, neighbor_table, config.g0 * config.dt
        )


def accumulate_phases(
    state: LatticeState, history: InteractionHistory, config: GasConfig
) -> InteractionHistory:
    """Add the phases acquired during the step that led to `state`.

    Static probes gain g0*dt with every environment particle on a
    nearest-neighbour site; moving probes gain `crossing_phase` with the
    occupant of every site they entered during the step.

    :param state: lattice state at the end of the step
    :type state: LatticeState
    :param history: history up to the start of the step
    :type history: InteractionHistory
    :param config: gas configuration
    :type config: GasConfig
    :return: the updated history, stamped with the state's time
    :rtype: InteractionHistory
    """
    gamma = np.array(history.gamma, copy=True)
    _accumulate_inplace(gamma, state, config)
    gamma_AA = history.gamma_AA
    if config.probe_probe and not config.moving:
        assert config.dt is not None
        gamma_AA = gamma_AA + probe_adjacency(config) * config.g0 * config.dt
    return InteractionHistory(gamma, state.time, gamma_AA)


def simulate(
    config: GasConfig,
    rng: Optional[np.random.Generator] = None,
    check_invariants: bool = False,
) -> List[InteractionHistory]:
    """Run one trajectory of the gas and record Gamma at every snapshot time.

    :param config: gas configuration; validated first
    :type config: GasConfig
    :param rng: random stream; defaults to one seeded from `config.seed`
    :type rng: Optional[np.random.Generator]
    :param check_invariants: assert exclusion and particle conservation
        after every step
    :type check_invariants: bool
    :return: one history per entry of `config.snapshot_times`
    :rtype: List[InteractionHistory]
    """
    config.validate()
    if rng is None:
        rng = np.random.default_rng(np.random.SeedSequence(config.seed))
    assert config.snapshot_times is not None and config.dt is not None

    state = init_lattice(config, rng)
    neighbor_table = _neighbor_table(config)
    gamma = np.zeros((config.n_probes, config.N_env))
    aa_rate = np.zeros((config.n_probes, config.n_probes))
    if config.probe_probe and not config.moving:
        aa_rate = probe_adjacency(config) * config.g0 * config.dt

    pending = list(zip(config.snapshot_steps, config.snapshot_times))
    snapshots: List[InteractionHistory] = []

    def emit(step: int):
        while pending and pending[0][0] <= step:
            _, t = pending.pop(0)
            snapshots.append(InteractionHistory(gamma, t, aa_rate * step))

    logger.debug(
        f"Simulating {config.n_steps} steps: {config.N_env} particles on "
        f"{config.shape[0]}x{config.shape[1]} sites, {config.n_probes} probes"
    )
    emit(0)
    for step in range(1, config.n_steps + 1):
        if not pending:
            break
        _hop_inplace(state, config, rng)
        _accumulate_inplace(gamma, state, config, neighbor_table)
        if check_invariants:
            state.check()
        emit(step)
    # snapshot times that round past the last step
    for _, t in pending:
        snapshots.append(InteractionHistory(gamma, t, aa_rate * state.step))
    return snapshots
