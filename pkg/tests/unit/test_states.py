import networkx as nx
import numpy as np
import pytest

from spingas.entanglement import concurrence, negativity_summary
from spingas.states import (
    StateFamily,
    StateSpec,
    graph_state,
    make_state,
    make_state_vector,
)
from spingas.utils import ConfigurationError
from tests.unit.conftest import expectation, pauli_string

valid_specs = [
    (StateFamily.BELL_PHI_PLUS, 2),
    (StateFamily.BELL_PSI_PLUS, 2),
    (StateFamily.TWO_QUBIT_CLUSTER, 2),
    (StateFamily.GHZ, 1),
    (StateFamily.GHZ, 5),
    (StateFamily.GHZ_PRIME, 4),
    (StateFamily.GHZ_DOUBLE_PRIME, 3),
    (StateFamily.W, 2),
    (StateFamily.W, 6),
    (StateFamily.LINEAR_CLUSTER, 6),
]

invalid_specs = [
    ("BellPhiPlus", 3),
    ("TwoQubitCluster", 1),
    ("GHZ", 0),
    ("W", 11),
]


def pytest_generate_tests(metafunc):
    if "valid_spec" in metafunc.fixturenames:
        metafunc.parametrize("valid_spec", valid_specs)
    if "invalid_spec" in metafunc.fixturenames:
        metafunc.parametrize("invalid_spec", invalid_specs)


def test_states_are_pure(valid_spec):
    rho = make_state(StateSpec(*valid_spec))
    assert rho.n_qubits == valid_spec[1]
    assert rho.trace() == pytest.approx(1)
    assert rho.purity() == pytest.approx(1)
    rho.validate()


def test_invalid_qubit_counts(invalid_spec):
    with pytest.raises(ConfigurationError) as info:
        make_state(StateSpec(*invalid_spec))
    assert info.value.key_path == "state.n_qubits"


def test_unknown_family():
    with pytest.raises(ConfigurationError) as info:
        StateSpec("Dicke", 3)
    assert info.value.key_path == "state.family"


def test_family_from_string():
    spec = StateSpec("GHZPrime", 3)
    assert spec.family is StateFamily.GHZ_PRIME
    assert spec.to_dict() == {"family": "GHZPrime", "n_qubits": 3}


def test_bell_states():
    phi = make_state_vector(StateSpec(StateFamily.BELL_PHI_PLUS, 2))
    psi = make_state_vector(StateSpec(StateFamily.BELL_PSI_PLUS, 2))
    assert np.allclose(phi, np.array([1, 0, 0, 1]) / np.sqrt(2))
    assert np.allclose(psi, np.array([0, 1, 1, 0]) / np.sqrt(2))
    assert concurrence(make_state(StateSpec(StateFamily.BELL_PSI_PLUS, 2))) == (
        pytest.approx(1.0, abs=1e-7)
    )


def test_w_entries():
    psi = make_state_vector(StateSpec(StateFamily.W, 3))
    expected = np.zeros(8)
    # |100>, |010>, |001>
    expected[[4, 2, 1]] = 1 / np.sqrt(3)
    assert np.allclose(psi, expected)


def test_w_single_qubit_reductions_agree():
    rho = make_state(StateSpec(StateFamily.W, 4))
    reductions = [rho.reduce([q]) for q in range(4)]
    for reduced in reductions:
        assert np.allclose(reduced.entries, np.diag([0.75, 0.25]))


def test_linear_cluster_stabilizers():
    rho = make_state(StateSpec(StateFamily.LINEAR_CLUSTER, 4))
    for word in ["XZII", "ZXZI", "IZXZ", "IIZX"]:
        assert expectation(rho, pauli_string(word)) == pytest.approx(1.0)


def test_two_qubit_cluster_is_linear_cluster():
    two = make_state_vector(StateSpec(StateFamily.TWO_QUBIT_CLUSTER, 2))
    linear = make_state_vector(StateSpec(StateFamily.LINEAR_CLUSTER, 2))
    assert np.allclose(two, linear)
    assert np.allclose(two, np.array([1, 1, 1, -1]) / 2)


def test_graph_state_of_star():
    psi = graph_state(nx.star_graph(3))
    rho = np.outer(psi, psi.conj())
    assert np.real(np.trace(rho @ pauli_string("XZZZ"))) == pytest.approx(1.0)
    assert np.real(np.trace(rho @ pauli_string("ZXII"))) == pytest.approx(1.0)


def test_ghz_variants_are_equally_entangled():
    variants = [StateFamily.GHZ, StateFamily.GHZ_PRIME, StateFamily.GHZ_DOUBLE_PRIME]
    for family in variants:
        summary = negativity_summary(make_state(StateSpec(family, 4)))
        for value in summary.per_partition.values():
            assert value == pytest.approx(0.5)


def test_ghz_variant_stabilizers():
    prime = make_state(StateSpec(StateFamily.GHZ_PRIME, 3))
    for word in ["XZZ", "ZXI", "ZIX"]:
        assert expectation(prime, pauli_string(word)) == pytest.approx(1.0)
    double_prime = make_state(StateSpec(StateFamily.GHZ_DOUBLE_PRIME, 3))
    for word in ["ZXX", "XZI", "XIZ"]:
        assert expectation(double_prime, pauli_string(word)) == pytest.approx(1.0)
