"""Reading and writing YAML run configurations."""
import logging
from os import PathLike
from pathlib import Path
from typing import Any, Dict, Union

import yaml
from jsonschema.exceptions import ValidationError

from spingas.dataclasses.gas import GasConfig
from spingas.dataclasses.run import Observables, RunSpec, Sweep
from spingas.schemas import validate_run_config
from spingas.states import StateSpec
from spingas.utils import ConfigurationError

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_FILE = Path(__file__).resolve().parent / "resources" / "run.default.yml"


def _key_path(error: ValidationError) -> str:
    return ".".join(str(p) for p in error.absolute_path)


def spec_from_dict(doc: Dict[str, Any]) -> RunSpec:
    """Build and validate a RunSpec from a configuration document.

    :param doc: mapping with `gas`, `state`, `run` and optional `sweep`
    :type doc: Dict[str, Any]
    :raises ConfigurationError: naming the key of the first problem found
    :return: the validated run specification
    :rtype: RunSpec
    """
    try:
        validate_run_config(doc)
    except ValidationError as e:
        raise ConfigurationError(_key_path(e), e.message) from e

    gas_doc = dict(doc["gas"])
    gas_doc["probe_sites"] = tuple(tuple(site) for site in gas_doc["probe_sites"])
    gas = GasConfig(**gas_doc)
    state = StateSpec(**doc["state"])

    run_doc = dict(doc["run"])
    observables = Observables(**run_doc.pop("observables"))
    sweep_doc = doc.get("sweep")
    sweep = None if sweep_doc is None else Sweep(**sweep_doc)
    spec = RunSpec(
        gas=gas, state=state, observables=observables, sweep=sweep, **run_doc
    )
    return spec.validate()


def parse_config(path: Union[str, PathLike]) -> RunSpec:
    """Read a YAML run configuration; defaults are filled for omitted keys
    and unknown keys are rejected.

    :param path: configuration file
    :type path: Union[str, PathLike]
    :raises ConfigurationError: for missing, ill-typed or invalid keys
    :return: the validated run specification
    :rtype: RunSpec
    """
    path = Path(path)
    logger.info(f"Reading run configuration from {path}")
    with path.open("r", encoding="utf-8") as f:
        try:
            doc = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigurationError("", f"{path} is not valid YAML: {e}") from e
    if not isinstance(doc, dict):
        raise ConfigurationError("", f"{path} does not contain a mapping")
    return spec_from_dict(doc)


def dump_config(spec: RunSpec) -> str:
    """Canonical YAML document of `spec` with every default written out."""
    return yaml.safe_dump(spec.to_dict(), sort_keys=False, default_flow_style=None)


def write_config(spec: RunSpec, path: Union[str, PathLike]):
    output_file = Path(path)
    with output_file.open("w", encoding="utf-8") as f:
        f.write(dump_config(spec))
