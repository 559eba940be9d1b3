"""Command-line front end.

Subcommands: ``solve`` (find the certified-optimal graph and write a
lockfile), ``check`` (validate a lockfile against registry + manifest),
``metrics`` (report costs of a pinned graph), and ``oracle`` (exhaustive
reference solve for small instances).

Exit codes: 0 success; 2 no valid graph (or an invalid lockfile); 3 budget
exhausted (best incumbent written if one exists); 4 unreadable or malformed
input, including flag misuse; 5 internal invariant violation; 6 instance too
large for the oracle.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .audit import format_fraction
from .graphs import (
    SolutionGraph,
    SolverSpec,
    check_graph,
    cost_cve,
    cost_duplicates,
    cost_vector,
    mean_oldness,
)
from .lockfile import dumps_lockfile, parse_lockfile
from .oracle import DEFAULT_LIMIT, CapacityError, oracle_solve
from .registry import LoadError, load_advisories, load_manifest, load_registry
from .semver import ParseError
from .solver import Timeout, Unsat, solve

__all__ = ["main"]

EXIT_OK = 0
EXIT_UNSAT = 2
EXIT_TIMEOUT = 3
EXIT_INPUT = 4
EXIT_INTERNAL = 5
EXIT_CAPACITY = 6


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; 2 is taken, and usage problems are
    # input problems
    def error(self, message: str) -> None:
        raise _UsageError(message)


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _add_shared(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--registry", required=True, help="registry JSON document")
    parser.add_argument(
        "--consistency",
        choices=("npm", "no-dups", "cargo"),
        default="npm",
        help="version-consistency rule (default npm)",
    )
    cycles = parser.add_mutually_exclusive_group()
    cycles.add_argument(
        "--allow-cycles",
        dest="acyclic",
        action="store_false",
        help="admit dependency cycles (default)",
    )
    cycles.add_argument(
        "--acyclic", dest="acyclic", action="store_true", help="require an acyclic graph"
    )
    parser.set_defaults(acyclic=False)
    parser.add_argument("--advisories", help="advisory JSON document")
    parser.add_argument(
        "--format", choices=("json", "summary"), default="summary", help="output format"
    )


def _add_solve_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--manifest", required=True, help="root manifest JSON document")
    parser.add_argument(
        "--minimize",
        default="min_oldness",
        help="comma-separated prioritized objectives (default min_oldness)",
    )
    parser.add_argument("--out", help="lockfile output path")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="optdeps", description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest="command", required=True)

    solve_parser = commands.add_parser("solve", help="find the optimal solution graph")
    _add_shared(solve_parser)
    _add_solve_flags(solve_parser)
    solve_parser.add_argument(
        "--timeout", type=float, default=600.0, help="search budget in seconds (default 600)"
    )
    solve_parser.set_defaults(func=cmd_solve)

    oracle_parser = commands.add_parser(
        "oracle", help="exhaustive reference solve for small instances"
    )
    _add_shared(oracle_parser)
    _add_solve_flags(oracle_parser)
    oracle_parser.add_argument(
        "--limit",
        type=int,
        default=DEFAULT_LIMIT,
        help=f"assignment budget before refusing (default {DEFAULT_LIMIT})",
    )
    oracle_parser.set_defaults(func=cmd_oracle)

    check_parser = commands.add_parser("check", help="validate a lockfile")
    _add_shared(check_parser)
    check_parser.add_argument("--manifest", required=True, help="root manifest JSON document")
    check_parser.add_argument("--lockfile", required=True, help="lockfile to validate")
    check_parser.set_defaults(func=cmd_check)

    metrics_parser = commands.add_parser("metrics", help="report costs of a lockfile")
    _add_shared(metrics_parser)
    metrics_parser.add_argument("--lockfile", required=True, help="lockfile to measure")
    metrics_parser.set_defaults(func=cmd_metrics)

    return parser


def _spec_for(args, objectives: tuple[str, ...]) -> SolverSpec:
    try:
        return SolverSpec(
            consistency=args.consistency.replace("-", "_"),
            objectives=objectives,
            allow_cycles=not args.acyclic,
            timeout=getattr(args, "timeout", 600.0),
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _solver_inputs(args):
    registry = load_registry(_read(args.registry))
    manifest = load_manifest(_read(args.manifest))
    objectives = tuple(part.strip() for part in args.minimize.split(",") if part.strip())
    if "min_cve" in objectives and not args.advisories:
        raise _UsageError("--minimize min_cve requires --advisories")
    advisories = load_advisories(_read(args.advisories)) if args.advisories else ()
    return registry, manifest, _spec_for(args, objectives), advisories


def _emit(payload: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
        return
    for key, value in payload.items():
        if isinstance(value, list):
            if value and isinstance(value[0], dict):
                for item in value:
                    print(f"{key}: {json.dumps(item, sort_keys=True)}")
                continue
            value = ", ".join(str(part) for part in value)
        print(f"{key}: {value}")


def _graph_stats(graph: SolutionGraph, spec, registry, advisories) -> dict:
    cost = cost_vector(graph, spec, registry, advisories)
    return {
        "status": "optimal",
        "consistency": spec.consistency,
        "objectives": list(spec.objectives),
        "cost": [format_fraction(part) for part in cost],
        "node_count": len(graph.package_nodes()),
        "duplicates": format_fraction(cost_duplicates(graph)),
        "mean_oldness": format_fraction(mean_oldness(graph, registry)),
        "cvss_total": format_fraction(cost_cve(graph, advisories)),
    }


def _finish_solve(result, args, spec, registry, advisories) -> int:
    if isinstance(result, Unsat):
        _emit({"status": "unsat", "reason": result.describe()}, args.format)
        return EXIT_UNSAT
    if isinstance(result, Timeout):
        payload = {"status": "timeout", "certified": False}
        if result.incumbent is not None and args.out:
            Path(args.out).write_text(dumps_lockfile(result.incumbent), encoding="utf-8")
            payload["lockfile"] = args.out
        payload["incumbent"] = result.incumbent is not None
        _emit(payload, args.format)
        return EXIT_TIMEOUT
    graph: SolutionGraph = result
    payload = _graph_stats(graph, spec, registry, advisories)
    if args.out:
        Path(args.out).write_text(dumps_lockfile(graph), encoding="utf-8")
        payload["lockfile"] = args.out
    _emit(payload, args.format)
    return EXIT_OK


def cmd_solve(args) -> int:
    registry, manifest, spec, advisories = _solver_inputs(args)
    result = solve(registry, manifest, spec, advisories)
    return _finish_solve(result, args, spec, registry, advisories)


def cmd_oracle(args) -> int:
    registry, manifest, spec, advisories = _solver_inputs(args)
    result = oracle_solve(registry, manifest, spec, advisories, limit=args.limit)
    return _finish_solve(result, args, spec, registry, advisories)


def cmd_check(args) -> int:
    registry = load_registry(_read(args.registry))
    manifest = load_manifest(_read(args.manifest))
    spec = _spec_for(args, ("min_oldness",))
    graph = parse_lockfile(_read(args.lockfile))
    violations = check_graph(registry, manifest, spec, graph)
    if not violations:
        _emit({"status": "valid"}, args.format)
        return EXIT_OK
    payload = {
        "status": "invalid",
        "violations": [
            {"condition": violation.condition, "message": violation.message}
            for violation in violations
        ],
    }
    _emit(payload, args.format)
    return EXIT_UNSAT


def cmd_metrics(args) -> int:
    registry = load_registry(_read(args.registry))
    advisories = load_advisories(_read(args.advisories)) if args.advisories else ()
    graph = parse_lockfile(_read(args.lockfile))
    for name, version in graph.package_nodes():
        if not registry.has_version(name, version):
            raise LoadError(f"lockfile node {name}@{version} is not in the registry")
    payload = {
        "node_count": len(graph.package_nodes()),
        "duplicates": format_fraction(cost_duplicates(graph)),
        "mean_oldness": format_fraction(mean_oldness(graph, registry)),
    }
    if args.advisories:
        payload["cvss_total"] = format_fraction(cost_cve(graph, advisories))
    _emit(payload, args.format)
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (LoadError, ParseError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except Exception as exc:  # noqa: BLE001 - invariant breakage surfaces as exit 5
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
