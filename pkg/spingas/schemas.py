from typing import Any

import jsonschema

_NUMBER = {"type": "number"}
_NON_NEGATIVE = {"type": "number", "minimum": 0}
_POSITIVE_INT = {"type": "integer", "minimum": 1}
_BIT_STRING = {"type": "string", "pattern": "^[01]+$"}

GAS_SCHEMA = {
    "type": "object",
    "properties": {
        "M": _POSITIVE_INT,
        "M_long": {"type": ["integer", "null"], "minimum": 1},
        "N_env": {"type": "integer", "minimum": 0},
        "eta": _NON_NEGATIVE,
        "g0": _NON_NEGATIVE,
        "dt": {"type": ["number", "null"], "minimum": 0},
        "duration": _NON_NEGATIVE,
        "snapshot_times": {"type": ["array", "null"], "items": _NON_NEGATIVE},
        "probe_sites": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {"type": "integer", "minimum": 0},
                "minItems": 2,
                "maxItems": 2,
            },
        },
        "probe_speed": _NON_NEGATIVE,
        "crossing_phase": _NUMBER,
        "boundary": {"enum": ["periodic", "reflecting"]},
        "seed": {"type": "integer", "minimum": 0},
        "probe_probe": {"type": "boolean"},
    },
    "required": ["M", "N_env", "eta", "g0", "duration", "probe_sites"],
    "additionalProperties": False,
}

STATE_SCHEMA = {
    "type": "object",
    "properties": {
        "family": {
            "enum": [
                "BellPhiPlus",
                "BellPsiPlus",
                "TwoQubitCluster",
                "GHZ",
                "GHZPrime",
                "GHZDoublePrime",
                "W",
                "LinearCluster",
            ]
        },
        "n_qubits": _POSITIVE_INT,
    },
    "required": ["family", "n_qubits"],
    "additionalProperties": False,
}

RUN_SCHEMA = {
    "type": "object",
    "properties": {
        "convention": {"enum": ["Projector11", "IsingZZ"]},
        "observables": {
            "type": "object",
            "properties": {
                "coherences": {
                    "type": "array",
                    "items": {
                        "type": "array",
                        "items": _BIT_STRING,
                        "minItems": 2,
                        "maxItems": 2,
                    },
                },
                "concurrence": {"type": "boolean"},
                "negativity_summary": {"type": "boolean"},
            },
            "additionalProperties": False,
        },
        "realizations": _POSITIVE_INT,
        "master_seed": {"type": "integer", "minimum": 0},
        "output_path": {"type": ["string", "null"]},
        "workers": _POSITIVE_INT,
        "check_invariants": {"type": "boolean"},
    },
    "required": ["observables"],
    "additionalProperties": False,
}

SWEEP_SCHEMA = {
    "type": ["object", "null"],
    "properties": {
        "parameter": {
            "enum": ["probe_distance", "probe_speed", "g0", "eta", "M", "N_env"]
        },
        "values": {"type": "array", "items": _NUMBER, "minItems": 1},
    },
    "required": ["parameter", "values"],
    "additionalProperties": False,
}

RUN_CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "gas": GAS_SCHEMA,
        "state": STATE_SCHEMA,
        "run": RUN_SCHEMA,
        "sweep": SWEEP_SCHEMA,
    },
    "required": ["gas", "state", "run"],
    "additionalProperties": False,
}


def validate_run_config(doc: Any):
    """
    Validates a given document against the run configuration schema. Raises
    a jsonschema.exceptions.ValidationError if errors are found

    :param doc: a value retrieved from deserializing a run configuration file
    """
    jsonschema.validate(schema=RUN_CONFIG_SCHEMA, instance=doc)
