"""
Fixtures for running the command line tool end to end
"""
import logging

import pytest
import yaml

SMALL_RUN = {
    "gas": {
        "M": 8,
        "N_env": 16,
        "eta": 1.0,
        "g0": 0.6,
        "duration": 2.0,
        "snapshot_times": [0.0, 1.0, 2.0],
        "probe_sites": [[2, 2], [2, 4]],
    },
    "state": {"family": "BellPsiPlus", "n_qubits": 2},
    "run": {
        "observables": {
            "coherences": [["01", "10"], ["00", "11"]],
            "concurrence": True,
            "negativity_summary": True,
        },
        "realizations": 12,
        "master_seed": 5,
        "output_path": "results.csv",
    },
    "sweep": {"parameter": "probe_distance", "values": [1, 3]},
}


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    """
    Runs the test inside a temporary directory and removes the log handlers
    the command line tool attaches to the root logger
    """
    monkeypatch.chdir(tmp_path)
    root = logging.getLogger()
    handlers = list(root.handlers)
    level = root.level
    yield tmp_path
    for handler in root.handlers[len(handlers) :]:
        handler.close()
    root.handlers = handlers
    root.setLevel(level)


@pytest.fixture
def small_config(workdir):
    """
    Path of a small run configuration with a probe-distance sweep
    """
    path = workdir / "run.yml"
    path.write_text(yaml.safe_dump(SMALL_RUN))
    return path
