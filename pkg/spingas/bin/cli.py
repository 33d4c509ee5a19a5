import argparse
import logging
import shutil
import sys
from dataclasses import replace
from typing import Dict

import numpy as np

from spingas import analytic
from spingas.config import DEFAULT_CONFIG_FILE, parse_config
from spingas.dataclasses.density_matrix import DensityMatrix, HamiltonianConvention
from spingas.dataclasses.history import InteractionHistory
from spingas.decoherence import apply_decoherence
from spingas.ensemble import run_ensemble
from spingas.entanglement import negativity_summary
from spingas.oracle import MAX_TOTAL_QUBITS, FullStateSpec, full_evolve_and_trace
from spingas.serialization import DensityMatrixCodec, ResultsCodec, write_results
from spingas.states import StateFamily, StateSpec, make_state
from spingas.utils import ConfigurationError, setup_logging

cli = argparse.ArgumentParser(
    prog="spingas", description="CLI Interface for spin-gas decoherence experiments"
)
cli.add_argument(
    "--log-level",
    help="Logging level of the console output (the log file is always DEBUG)",
    default="WARNING",
    choices=["DEBUG", "INFO", "WARNING", "ERROR"],
)
subparsers = cli.add_subparsers(dest="subcommand")
subcommands = {}
log = logging.getLogger()

ORACLE_TOLERANCE = 1e-10


# borrowing some ideas from https://gist.github.com/mivade/384c2c41c3a29c637cb6c603d4197f9f
def arg(*argnames, **kwargs):
    """Helper for defining arguments on subcommands"""
    return argnames, kwargs


def subcommand(*subparser_args, parent=subparsers, name=None):
    """Decorates a function and makes it available as a subcommand"""

    def decorator(func):
        parser = parent.add_parser(name or func.__name__, description=func.__doc__)
        for args, kwargs in subparser_args:
            parser.add_argument(*args, **kwargs)
        parser.set_defaults(func=func)
        subcommands[func] = parser
        return func

    return decorator


@subcommand(
    arg("-c", "--config", help="Path to the YAML run configuration", required=True),
    arg("--seed", help="Override the master seed", type=int),
    arg("--realizations", help="Override the number of realizations", type=int),
    arg("--workers", help="Number of worker processes", type=int),
    arg("-o", "--out", help="Output CSV path; defaults to run.output_path or stdout"),
)
def simulate(args):
    """
    Runs the ensemble described by a run configuration and writes the
    results CSV. Use 'get_default_config_yml' for the configuration format
    """
    try:
        spec = parse_config(args.config)
        overrides = {}
        if args.seed is not None:
            overrides["master_seed"] = args.seed
        if args.realizations is not None:
            overrides["realizations"] = args.realizations
        if args.workers is not None:
            overrides["workers"] = args.workers
        spec = replace(spec, **overrides).validate()
    except ConfigurationError as e:
        print(f"Invalid configuration: {e}", file=sys.stderr)
        sys.exit(2)
    result = run_ensemble(spec)
    out = args.out or spec.output_path
    if out is None:
        sys.stdout.write(ResultsCodec.dumps(result))
    else:
        write_results(result, out)
        log.info(f"Wrote {len(result)} rows to {out}")


@subcommand(
    arg(
        "--max-qubits",
        help="Bound on probe plus environment qubits",
        type=int,
        default=11,
    ),
    arg(
        "--trials",
        help="Random histories per size and convention",
        type=int,
        default=100,
    ),
    arg("--seed", help="Seed of the random histories", type=int, default=0),
    name="oracle-check",
)
def oracle_check(args):
    """
    Compares the closed-form evolution with brute-force evolution of the
    probes and environment for random histories and random probe states
    """
    if args.max_qubits > MAX_TOTAL_QUBITS:
        print(f"--max-qubits may not exceed {MAX_TOTAL_QUBITS}", file=sys.stderr)
        sys.exit(2)
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for convention in HamiltonianConvention:
        for n_probe in range(1, min(3, args.max_qubits) + 1):
            for n_env in range(0, min(8, args.max_qubits - n_probe) + 1):
                distance = 0.0
                for _ in range(args.trials):
                    gamma = rng.uniform(0, 2 * np.pi, size=(n_probe, n_env))
                    rho = random_density_matrix(n_probe, rng)
                    exact = apply_decoherence(
                        rho, InteractionHistory(gamma), convention
                    )
                    brute = full_evolve_and_trace(
                        FullStateSpec(gamma, rho, convention)
                    )
                    distance = max(
                        distance, float(np.max(np.abs(exact.entries - brute.entries)))
                    )
                worst = max(worst, distance)
                print(
                    f"{convention.value:12s} N_A={n_probe} N_B={n_env} "
                    f"max distance {distance:.3e}"
                )
    if worst > ORACLE_TOLERANCE:
        print(f"FAILED: worst distance {worst:.3e} exceeds {ORACLE_TOLERANCE}")
        sys.exit(1)
    print(f"OK: worst distance {worst:.3e}")


def random_density_matrix(n_qubits: int, rng: np.random.Generator) -> DensityMatrix:
    """Random full-rank density matrix from a complex Ginibre matrix."""
    dim = 2**n_qubits
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return DensityMatrix(rho / np.trace(rho).real)


def parse_params(text: str) -> Dict[str, str]:
    """Parse `k=v,k=v` into a dictionary"""
    params: Dict[str, str] = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        if "=" not in item:
            raise ValueError(f"Expected key=value, got {item!r}")
        key, value = item.split("=", 1)
        params[key.strip()] = value.strip()
    return params


def _evaluate_model(model: str, p: Dict[str, str]):
    def num(key: str) -> float:
        return float(p[key])

    def integer(key: str) -> int:
        return int(p[key])

    if model == "markov_coherence":
        return analytic.markov_coherence(num("nu"), num("delta_phi"), num("steps"))
    if model == "exponential_vs_gaussian":
        exp_value, gauss_value, scales = analytic.exponential_vs_gaussian(
            num("delta_phi"), num("delta_t"), num("t")
        )
        return {
            "exponential": exp_value,
            "gaussian": gauss_value,
            "tau_e": scales.tau_e,
            "tau_g": scales.tau_g,
        }
    if model == "ghz_avg_negativity":
        return analytic.ghz_avg_negativity(num("p"), integer("N_A"))
    if model == "ghz_dp_negativities":
        average, minimum = analytic.ghz_dp_negativities(num("p"), integer("N_A"))
        return {"average": average, "minimum": minimum}
    if model == "ghz_dp_disentangle_p":
        return analytic.ghz_dp_disentangle_p(integer("N_A"))
    if model == "w_avg_negativity":
        return analytic.w_avg_negativity(num("p"), integer("N_A"))
    if model == "revival_coherence":
        revival = analytic.RevivalModel(
            s=num("s"),
            M=integer("M"),
            delta_phi=num("delta_phi"),
            N_A=integer("N_A"),
            N_B=integer("N_B"),
            alpha_prime=float(p.get("alpha_prime", 0.0)),
            alpha_double_prime=float(p.get("alpha_double_prime", 0.0)),
        )
        return analytic.revival_coherence(revival, StateFamily(p.get("family", "GHZ")))
    if model == "revival_time":
        return analytic.revival_time(
            integer("M"), integer("N_A"), num("delta_phi"), num("step_time")
        )
    raise ValueError(f"Unknown model {model!r}")


ANALYTIC_MODELS = [
    "markov_coherence",
    "exponential_vs_gaussian",
    "ghz_avg_negativity",
    "ghz_dp_negativities",
    "ghz_dp_disentangle_p",
    "w_avg_negativity",
    "revival_coherence",
    "revival_time",
]


@subcommand(
    arg(
        "-m",
        "--model",
        help="Name of the model",
        choices=ANALYTIC_MODELS,
        required=True,
    ),
    arg("-p", "--params", help="Model parameters as k=v,k=v", default=""),
    name="analytic",
)
def analytic_model(args):
    """
    Evaluates one of the closed-form decay and negativity models
    """
    try:
        value = _evaluate_model(args.model, parse_params(args.params))
    except KeyError as e:
        print(f"Missing parameter {e} for {args.model}", file=sys.stderr)
        subcommands[args.func].print_help()
        sys.exit(2)
    except ValueError as e:
        print(str(e), file=sys.stderr)
        sys.exit(2)
    if isinstance(value, dict):
        for key, v in value.items():
            print(f"{key}={v:.17g}")
    else:
        print(f"{value:.17g}")


@subcommand(
    arg(
        "-f",
        "--family",
        help="State family",
        required=True,
        choices=[f.value for f in StateFamily],
    ),
    arg("-n", help="Number of qubits", type=int, required=True, dest="n_qubits"),
    arg("-o", "--out", help="Output file for the density matrix"),
)
def states(args):
    """
    Writes the density matrix of a named probe state and prints its
    negativity summary
    """
    try:
        rho = make_state(StateSpec(args.family, args.n_qubits))
    except ConfigurationError as e:
        print(str(e), file=sys.stderr)
        sys.exit(2)
    if args.out:
        DensityMatrixCodec.dump(rho, args.out)
    else:
        sys.stdout.write(DensityMatrixCodec.dumps(rho))
    if rho.n_qubits >= 2:
        summary = negativity_summary(rho)
        print(
            f"negativity average={summary.average:.6f} "
            f"minimum={summary.minimum:.6f}",
            file=sys.stderr,
        )


@subcommand()
def get_default_config_yml(_args):
    """
    Creates a default 'run.default.yml' file in the current directory
    that can be edited and used with 'spingas simulate'
    """
    shutil.copyfile(DEFAULT_CONFIG_FILE, "run.default.yml")
    print("run.default.yml created in the current directory")


def app(argv=None):
    args = cli.parse_args(argv)
    setup_logging(getattr(logging, args.log_level))
    if args.subcommand is None:
        cli.print_help()
    else:
        args.func(args)


# entrypoint is actually defined in pyproject.toml; this is here for convenience/testing
if __name__ == "__main__":
    app()
