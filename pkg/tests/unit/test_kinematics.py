import numpy as np
import pytest

from spingas.dataclasses.gas import Boundary, GasConfig, LatticeState
from spingas.dataclasses.history import InteractionHistory
from spingas.kinematics import (
    accumulate_phases,
    hop_step,
    init_lattice,
    probe_adjacency,
    simulate,
)
from spingas.utils import ConfigurationError


def lattice_state(rows, cols, particles, probes=(), blocked=True):
    """A hand-placed lattice state; static probes block their sites."""
    occupancy = -np.ones((rows, cols), dtype=np.int64)
    for l, (r, c) in enumerate(particles):
        occupancy[r, c] = l
    mask = np.zeros((rows, cols), dtype=bool)
    if blocked:
        for r, c in probes:
            mask[r, c] = True
    return LatticeState(
        occupancy=occupancy,
        env_positions=np.array(particles, dtype=np.int64).reshape(-1, 2),
        probe_positions=np.array(probes, dtype=float).reshape(-1, 2),
        blocked=mask,
    )


def test_init_fills_small_lattice(rng):
    gas = GasConfig(M=2, N_env=4, eta=1.0, g0=0.0, duration=0.0, probe_sites=())
    state = init_lattice(gas, rng)
    state.check()
    assert np.all(state.occupancy >= 0)


def test_init_distinct_sites(rng):
    gas = GasConfig(M=40, N_env=400, eta=1.0, g0=0.8, duration=1.0, probe_sites=())
    state = init_lattice(gas, rng)
    state.check()
    assert len({tuple(p) for p in state.env_positions}) == 400


def test_init_avoids_static_probes(rng):
    gas = GasConfig(M=3, N_env=8, eta=1.0, g0=0.8, duration=1.0, probe_sites=((1, 1),))
    state = init_lattice(gas, rng)
    state.check()
    assert state.occupancy[1, 1] == -1
    assert state.blocked[1, 1]


def test_init_overfull(rng):
    gas = GasConfig(M=2, N_env=4, eta=1.0, g0=0.0, duration=0.0, probe_sites=((0, 0),))
    with pytest.raises(ConfigurationError):
        init_lattice(gas, rng)


def test_init_is_deterministic(small_gas):
    a = init_lattice(small_gas, np.random.default_rng(5))
    b = init_lattice(small_gas, np.random.default_rng(5))
    assert np.array_equal(a.occupancy, b.occupancy)
    assert np.array_equal(a.env_positions, b.env_positions)


def test_no_hops_without_eta(rng):
    gas = GasConfig(M=6, N_env=10, eta=0.0, g0=0.8, duration=1.0, probe_sites=((0, 0),))
    state = init_lattice(gas, rng)
    after = hop_step(state, gas, rng)
    assert np.array_equal(after.occupancy, state.occupancy)
    assert after.step == 1
    assert after.time == pytest.approx(gas.dt)
    # the input state is untouched
    assert state.step == 0


def test_lone_particle_always_hops(rng):
    gas = GasConfig(
        M=10, N_env=1, eta=1.0, dt=1.0, g0=0.0, duration=1.0, probe_sites=()
    )
    state = lattice_state(10, 10, [(4, 4)])
    for _ in range(20):
        after = hop_step(state, gas, rng)
        moved = np.abs(after.env_positions[0] - state.env_positions[0])
        moved = np.minimum(moved, 10 - moved)
        assert moved.sum() == 1
        state = after


def test_reflecting_boundary_keeps_particles_inside(rng):
    gas = GasConfig(
        M=2,
        N_env=1,
        eta=1.0,
        dt=1.0,
        g0=0.0,
        duration=1.0,
        probe_sites=(),
        boundary=Boundary.REFLECTING,
    )
    state = lattice_state(2, 2, [(0, 0)])
    for _ in range(50):
        state = hop_step(state, gas, rng)
        state.check()


def test_blocked_sites_stay_empty(small_gas, rng):
    state = init_lattice(small_gas, rng)
    for _ in range(200):
        state = hop_step(state, small_gas, rng)
        state.check()
        for r, c in small_gas.probe_sites:
            assert state.occupancy[r, c] == -1


def test_pinned_neighbours_collect_g0_t():
    # every free site of the 2x2 torus is occupied, so nothing can move;
    # (1, 0) and (0, 1) touch the probe, (1, 1) does not
    gas = GasConfig(
        M=2, N_env=3, eta=1.0, g0=0.5, duration=2.0, dt=0.1, probe_sites=((0, 0),)
    )
    state = lattice_state(2, 2, [(1, 0), (0, 1), (1, 1)], probes=[(0, 0)])
    history = InteractionHistory.zeros(1, 3)
    for _ in range(gas.n_steps):
        state = hop_step(state, gas, np.random.default_rng(0))
        history = accumulate_phases(state, history, gas)
    assert history.gamma[0] == pytest.approx([1.0, 1.0, 0.0], abs=1e-12)
    assert history.time == pytest.approx(2.0)


def test_distant_particle_collects_nothing():
    gas = GasConfig(M=10, N_env=1, eta=0.0, g0=0.8, duration=1.0, probe_sites=((0, 0),))
    state = lattice_state(10, 10, [(5, 5)], probes=[(0, 0)])
    history = InteractionHistory.zeros(1, 1)
    for _ in range(10):
        history = accumulate_phases(state, history, gas)
    assert history.gamma[0, 0] == 0.0


def test_moving_probe_crosses_occupied_cells():
    gas = GasConfig(
        M=1,
        M_long=10,
        N_env=3,
        eta=0.0,
        g0=0.0,
        duration=1.0,
        dt=1.0,
        probe_sites=((0, 0),),
        probe_speed=3.0,
        crossing_phase=0.1,
    )
    state = lattice_state(
        1, 10, [(0, 1), (0, 2), (0, 3)], probes=[(0, 0)], blocked=False
    )
    state = hop_step(state, gas, np.random.default_rng(0))
    assert state.probe_positions[0, 1] == pytest.approx(3.0)
    history = accumulate_phases(state, InteractionHistory.zeros(1, 3), gas)
    assert history.gamma[0] == pytest.approx([0.1, 0.1, 0.1])


def test_moving_probe_wraps_around():
    gas = GasConfig(
        M=1,
        M_long=4,
        N_env=1,
        eta=0.0,
        g0=0.0,
        duration=1.0,
        dt=1.0,
        probe_sites=((0, 3),),
        probe_speed=2.0,
        crossing_phase=0.5,
    )
    state = lattice_state(1, 4, [(0, 1)], probes=[(0, 3)], blocked=False)
    state = hop_step(state, gas, np.random.default_rng(0))
    assert state.probe_positions[0, 1] == pytest.approx(1.0)
    history = accumulate_phases(state, InteractionHistory.zeros(1, 1), gas)
    assert history.gamma[0, 0] == pytest.approx(0.5)


def test_probe_adjacency():
    gas = GasConfig(
        M=5,
        N_env=0,
        eta=1.0,
        g0=1.0,
        duration=1.0,
        probe_sites=((0, 0), (0, 1), (3, 3)),
    )
    assert np.array_equal(
        probe_adjacency(gas), [[0, 1, 0], [1, 0, 0], [0, 0, 0]]
    )


def test_simulate_is_deterministic(small_gas):
    a = simulate(small_gas)
    b = simulate(small_gas)
    assert a == b
    c = simulate(small_gas.with_values(seed=8))
    assert a != c


def test_simulate_snapshots(small_gas):
    histories = simulate(small_gas, check_invariants=True)
    assert [h.time for h in histories] == list(small_gas.snapshot_times)
    for h in histories:
        assert h.gamma.shape == (2, 12)
    for earlier, later in zip(histories, histories[1:]):
        assert np.all(later.gamma >= earlier.gamma)
    # g0 dt is gained per step by at most 4 neighbours
    total = histories[-1].total_phase()
    assert np.all(total <= 4 * small_gas.g0 * small_gas.duration + 1e-9)


def test_simulate_zero_duration():
    gas = GasConfig(
        M=5, N_env=5, eta=1.0, g0=1.0, duration=0.0, probe_sites=((2, 2),)
    )
    (history,) = simulate(gas)
    assert history.time == 0.0
    assert not history.gamma.any()


def test_simulate_without_coupling(small_gas):
    for history in simulate(small_gas.with_values(g0=0.0)):
        assert not history.gamma.any()


def test_simulate_probe_probe_phases():
    gas = GasConfig(
        M=4,
        N_env=0,
        eta=1.0,
        g0=0.5,
        duration=1.0,
        probe_sites=((0, 0), (0, 1)),
        probe_probe=True,
    )
    (history,) = simulate(gas)
    assert history.gamma.shape == (2, 0)
    assert history.gamma_AA[0, 1] == pytest.approx(0.5)
    assert history.gamma_AA[1, 0] == pytest.approx(0.5)
    assert history.gamma_AA[0, 0] == 0.0


def test_simulate_validates(small_gas):
    with pytest.raises(ConfigurationError):
        simulate(small_gas.with_values(eta=-1.0))


HOPS = ((-1, 0), (1, 0), (0, -1), (0, 1))


def reference_total_phase(config: GasConfig, rng: np.random.Generator) -> np.ndarray:
    """Plain-python walk with the same hop and accumulation rules, for a
    periodic lattice with static probes."""
    rows, cols = config.shape
    probes = set(config.probe_sites)
    free = [(r, c) for r in range(rows) for c in range(cols) if (r, c) not in probes]
    positions = [free[i] for i in rng.choice(len(free), config.N_env, replace=False)]
    occupied = set(positions)
    around = [
        {((r + dr) % rows, (c + dc) % cols) for dr, dc in HOPS}
        for r, c in config.probe_sites
    ]
    total = np.zeros(config.n_probes)
    for _ in range(config.n_steps):
        for l in rng.permutation(config.N_env):
            if rng.random() >= config.hop_probability:
                continue
            dr, dc = HOPS[rng.integers(4)]
            r, c = positions[l]
            target = ((r + dr) % rows, (c + dc) % cols)
            if target in occupied or target in probes:
                continue
            occupied.remove((r, c))
            occupied.add(target)
            positions[l] = target
        for k, sites in enumerate(around):
            total[k] += config.g0 * config.dt * len(sites & occupied)
    return total


def test_simulate_matches_reference_walk():
    gas = GasConfig(
        M=6,
        N_env=12,
        eta=1.0,
        g0=0.1,
        dt=0.5,
        duration=10.0,
        probe_sites=((1, 1), (1, 4)),
    )
    runs = 600
    fast = np.array(
        [
            simulate(gas, rng=np.random.default_rng(seed))[-1].total_phase()
            for seed in range(runs)
        ]
    )
    slow = np.array(
        [
            reference_total_phase(gas, np.random.default_rng(10_000 + seed))
            for seed in range(runs)
        ]
    )
    # particles start uniformly on the free sites, which is stationary
    expected = gas.g0 * gas.duration * 4 * gas.N_env / (gas.n_sites - gas.n_probes)
    for k in range(gas.n_probes):
        a, b = fast[:, k], slow[:, k]
        spread = np.sqrt((a.var() + b.var()) / runs)
        assert abs(a.mean() - b.mean()) < 4 * spread
        assert abs(a.mean() - expected) < 4 * np.sqrt(a.var() / runs)
        assert a.var() == pytest.approx(b.var(), rel=0.35)
