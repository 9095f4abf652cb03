"""
Command-line front end for the quantum logic and Grassmann graph checks
"""
import argparse
import json
import logging
import sys

from src.helpers.apartments import (
    AssumptionViolatedError,
    IndexOutOfRangeError,
    NotOrthoApartmentError,
)
from src.helpers.config import (
    SUITES,
    ConfigError,
    build_config,
    load_environment,
)
from src.helpers.grassmann_graph import (
    DEFAULT_BUILD_CAP,
    GraphAssumptionError,
    UnclassifiableCliqueError,
    build,
    clique_summary,
    maximal_cliques,
)
from src.helpers.linalg import DimensionMismatchError
from src.helpers.reports import write_report
from src.helpers.scalars import FieldMismatchError, FieldTag, ScalarParseError
from src.helpers.subspaces import SizeCapExceededError, enumerate_subspaces
from src.helpers.suites import TRANSFORM_KINDS, run_verification

LOG_FORMAT = "[%(levelname)s] %(name)s: %(message)s"

FLAG_NAMES = (
    "suite",
    "n",
    "k",
    "p",
    "seed",
    "samples",
    "jobs",
    "quick",
    "out",
    "dot",
    "case",
    "kind",
)

# Raised for inputs outside a supported range; reported as usage errors.
USAGE_ERRORS = (
    ConfigError,
    GraphAssumptionError,
    AssumptionViolatedError,
    SizeCapExceededError,
    DimensionMismatchError,
    ScalarParseError,
    FieldMismatchError,
    IndexOutOfRangeError,
    NotOrthoApartmentError,
)


def _add_run_flags(parser, with_p=True, with_k=True):
    parser.add_argument("--n", type=int, help="ambient dimension")
    if with_k:
        parser.add_argument("--k", type=int, help="subspace dimension")
    if with_p:
        parser.add_argument("--p", type=int, help="prime for GF(p)")
    parser.add_argument("--seed", type=int, help="64-bit seed (default QLOGIC_SEED)")
    parser.add_argument("--samples", type=int, help="samples per parameter")
    parser.add_argument("--out", help="write the JSON report to this file")


def build_parser():
    """The qlogic argument parser."""
    parser = argparse.ArgumentParser(
        prog="qlogic",
        description="Exact checks for Hilbert lattices, Grassmann graphs, apartments.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", help="run verification suites")
    verify.add_argument("suite", choices=SUITES + ("all",))
    _add_run_flags(verify)
    verify.add_argument("--jobs", type=int, help="worker processes for suites")
    verify.add_argument(
        "--quick", action="store_true", help="reduced samples and instances"
    )

    subspaces = commands.add_parser("subspaces", help="list k-subspaces of GF(p)^n")
    subspaces.add_argument("--n", type=int, required=True)
    subspaces.add_argument("--k", type=int, required=True)
    subspaces.add_argument("--field", required=True, help='e.g. "GF(2)"')

    graph = commands.add_parser("graph", help="build and export a Grassmann graph")
    graph.add_argument("--n", type=int, required=True)
    graph.add_argument("--k", type=int, required=True)
    graph.add_argument("--p", type=int, required=True)
    graph.add_argument("--dot", help="write Graphviz text to this file")
    graph.add_argument("--out", help="write vertices and edges as JSON")

    cliques = commands.add_parser("cliques", help="classify maximal cliques")
    cliques.add_argument("--n", type=int, required=True)
    cliques.add_argument("--k", type=int, required=True)
    cliques.add_argument("--p", type=int, required=True)

    apartments = commands.add_parser("apartments", help="apartment checks")
    apartments.add_argument("action", choices=("verify",))
    apartments.add_argument("--case", choices=("linear", "ortho"), required=True)
    _add_run_flags(apartments)

    transforms = commands.add_parser("transforms", help="semilinear map checks")
    transforms.add_argument("action", choices=("check",))
    transforms.add_argument("--kind", choices=TRANSFORM_KINDS, required=True)
    _add_run_flags(transforms, with_p=False, with_k=False)
    return parser


def _config_from(args, environment, **overrides):
    flags = {name: getattr(args, name, None) for name in FLAG_NAMES}
    flags.update(overrides)
    return build_config(args.command, environment, **flags)


def _finish(report, config):
    """Print a per-suite summary, write the report, map to an exit code."""
    for suite in report.suites:
        failed = [check.name for check in suite.checks if not check.passed]
        status = "OK" if suite.passed else f"FAIL ({', '.join(failed)})"
        print(f"[{suite.suite}] {status} (checks={len(suite.checks)})")
    totals = report.totals()
    print(
        f"[{report.command}] samples={totals['samples']}, "
        f"failures={totals['failures']}, {report.wall_clock_seconds:.2f}s"
    )
    if config.out:
        write_report(report, config.out)
    return 0 if report.passed else 1


def run_verify(args, environment):
    config = _config_from(args, environment)
    return _finish(run_verification(config), config)


def run_apartments(args, environment):
    suite = "apartments" if args.case == "linear" else "ortho-apartments"
    config = _config_from(args, environment, suite=suite)
    report = run_verification(config, command=f"apartments verify --case {args.case}")
    return _finish(report, config)


def run_transforms(args, environment):
    config = _config_from(args, environment, suite="transforms")
    report = run_verification(config, command=f"transforms check --kind {args.kind}")
    return _finish(report, config)


def run_subspaces(args, environment):
    """Print one subspace per line as its RREF rows."""
    config = _config_from(args, environment, field_name=args.field)
    field = FieldTag.parse(config.field_name)
    if not field.is_finite:
        raise ConfigError("subspaces enumerates over a prime field GF(p) only")
    for subspace in enumerate_subspaces(config.n, config.k, field.modulus):
        print(json.dumps(subspace.to_json()["rows"], separators=(",", ":")))
    return 0


def run_graph(args, environment):
    config = _config_from(args, environment)
    graph = build(
        config.n,
        config.k,
        config.p,
        max_vertices=DEFAULT_BUILD_CAP,
        max_stored=config.max_vertices,
    )
    print(
        f"Grassmann graph n={graph.n}, k={graph.k}, p={graph.p}: "
        f"{graph.order} vertices, {len(graph.edges())} edges"
    )
    if config.dot:
        with open(config.dot, "w", encoding="utf-8") as handle:
            handle.write(graph.to_dot())
    if config.out:
        with open(config.out, "w", encoding="utf-8") as handle:
            json.dump(graph.to_json(), handle, sort_keys=True, indent=2)
            handle.write("\n")
    return 0


def run_cliques(args, environment):
    """Print the maximal cliques grouped by kind and size."""
    config = _config_from(args, environment)
    graph = build(config.n, config.k, config.p, max_stored=config.max_vertices)
    try:
        cliques = maximal_cliques(graph)
    except UnclassifiableCliqueError as error:
        print(f"[error] {error}", file=sys.stderr)
        return 1
    print(f"{'kind':<6}{'size':>6}{'count':>7}")
    for (kind, size), count in clique_summary(cliques):
        print(f"{kind:<6}{size:>6}{count:>7}")
    print(f"total {len(cliques)}")
    return 0


COMMANDS = {
    "verify": run_verify,
    "subspaces": run_subspaces,
    "graph": run_graph,
    "cliques": run_cliques,
    "apartments": run_apartments,
    "transforms": run_transforms,
}


def _configure_logging(level_name):
    level = logging.getLevelName(level_name)
    if not isinstance(level, int):
        raise ConfigError(f"Unknown QLOGIC_LOG_LEVEL {level_name!r}")
    logging.basicConfig(level=level, format=LOG_FORMAT)


def main(argv=None):
    """
    Entry point; returns 0 when every check passed, 1 on a failing check and
    2 on usage or configuration errors.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as error:
        return error.code
    try:
        environment = load_environment()
        _configure_logging(environment.log_level)
        return COMMANDS[args.command](args, environment)
    except USAGE_ERRORS as error:
        print(f"[error] {error}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
