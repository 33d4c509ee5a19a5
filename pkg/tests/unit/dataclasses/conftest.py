import numpy as np
import pytest

from spingas.dataclasses.history import InteractionHistory


@pytest.fixture
def history():
    """Two probes, three environment particles; particle 2 never met
    probe 0"""
    gamma = np.array([[0.5, 1.0, 0.0], [0.25, 0.0, 2.0]])
    return InteractionHistory(gamma, time=1.5)
