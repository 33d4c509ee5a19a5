import numpy as np
import pytest

from spingas.dataclasses.gas import Boundary, GasConfig, LatticeState
from spingas.utils import ConfigurationError


def make_gas(**kwargs):
    values = dict(M=10, N_env=20, eta=1.0, g0=0.8, duration=1.0, probe_sites=((2, 3),))
    values.update(kwargs)
    return GasConfig(**values)


def test_defaults():
    gas = make_gas(eta=2.0)
    assert gas.dt == pytest.approx(0.05)
    assert gas.M_long == 10
    assert gas.snapshot_times == (1.0,)
    assert gas.boundary == Boundary.PERIODIC
    assert not gas.moving
    assert gas.n_steps == 20
    assert gas.hop_probability == pytest.approx(0.1)


def test_zero_eta_default_step():
    gas = make_gas(eta=0.0)
    assert gas.dt == pytest.approx(0.1)
    assert gas.hop_probability == 0.0


def test_snapshot_steps():
    gas = make_gas(duration=2.0, snapshot_times=[0, 0.5, 2.0])
    assert gas.snapshot_steps == (0, 5, 20)


def test_boundary_from_string():
    assert make_gas(boundary="reflecting").boundary == Boundary.REFLECTING


def test_with_values_keeps_derived_defaults():
    gas = make_gas()
    faster = gas.with_values(eta=4.0)
    assert faster.dt == pytest.approx(0.025)
    bigger = gas.with_values(M=20)
    assert bigger.shape == (20, 20)
    strip = make_gas(M_long=40).with_values(M=5)
    assert strip.shape == (5, 40)


def test_with_values_keeps_explicit_step():
    gas = make_gas(dt=0.05)
    assert gas.with_values(eta=4.0).dt == pytest.approx(0.05)
    assert gas.with_values(eta=4.0, dt=0.2).dt == pytest.approx(0.2)
    # a derived step becomes explicit once it is set
    pinned = make_gas().with_values(dt=0.05)
    assert pinned.with_values(eta=2.0).dt == pytest.approx(0.05)
    with pytest.raises(ConfigurationError) as info:
        gas.with_values(eta=40.0).validate()
    assert info.value.key_path == "gas.dt"


bad_values = [
    ({"M": 0}, "gas.M"),
    ({"N_env": -1}, "gas.N_env"),
    ({"eta": -1.0}, "gas.eta"),
    ({"g0": float("nan")}, "gas.g0"),
    ({"N_env": 100}, "gas.N_env"),
    ({"eta": 1.0, "dt": 2.0}, "gas.dt"),
    ({"probe_sites": ((10, 0),)}, "gas.probe_sites"),
    ({"probe_sites": ((1, 1), (1, 1))}, "gas.probe_sites"),
    ({"snapshot_times": (0.5, 0.2)}, "gas.snapshot_times"),
    ({"snapshot_times": (2.0,)}, "gas.snapshot_times"),
]


def pytest_generate_tests(metafunc):
    if "bad_value" in metafunc.fixturenames:
        metafunc.parametrize("bad_value", bad_values)


def test_validate_names_offending_key(bad_value):
    changes, key_path = bad_value
    with pytest.raises(ConfigurationError) as info:
        make_gas(**changes).validate()
    assert info.value.key_path == key_path


def test_validate_custom_prefix():
    with pytest.raises(ConfigurationError) as info:
        make_gas(M=0).validate("sweep")
    assert info.value.key_path == "sweep.M"


def test_to_dict_is_canonical():
    doc = make_gas(probe_sites=((1, 2), (3, 4))).to_dict()
    assert doc["probe_sites"] == [[1, 2], [3, 4]]
    assert doc["boundary"] == "periodic"
    assert doc["dt"] is None
    assert make_gas(dt=0.05).to_dict()["dt"] == pytest.approx(0.05)
    assert GasConfig(**{**doc, "probe_sites": ((1, 2), (3, 4))}) == make_gas(
        probe_sites=((1, 2), (3, 4))
    )


def test_lattice_state_check_detects_overlap():
    occupancy = -np.ones((3, 3), dtype=np.int64)
    occupancy[0, 0] = 0
    state = LatticeState(
        occupancy=occupancy,
        env_positions=np.array([[0, 0], [0, 0]]),
        probe_positions=np.zeros((0, 2)),
    )
    with pytest.raises(AssertionError):
        state.check()


def test_lattice_state_copy_is_independent():
    occupancy = -np.ones((2, 2), dtype=np.int64)
    occupancy[1, 1] = 0
    state = LatticeState(
        occupancy=occupancy,
        env_positions=np.array([[1, 1]]),
        probe_positions=np.array([[0.0, 0.5]]),
    )
    state.check()
    copy = state.copy()
    copy.occupancy[1, 1] = -1
    assert state.occupancy[1, 1] == 0
    assert state.probe_sites() == [(0, 0)]
