"""Offline dependency solving with certified-optimal solution graphs.

Given a registry snapshot, a root manifest, and a solver configuration
(consistency rule, prioritized minimization objectives, cyclicity, budget),
`solve` returns the valid solution graph that is provably minimal under the
lexicographic objective order, `oracle_solve` certifies small instances by
exhaustive enumeration, and the remaining modules cover validity checking,
cost metrics, vulnerability audits, and canonical lockfiles.
"""

from .audit import (
    AuditReport,
    NodeAudit,
    ReportDelta,
    affected,
    audit_report,
    compare_reports,
    format_fraction,
    report_to_json,
)
from .graphs import (
    CONSISTENCY_RULES,
    OBJECTIVE_NAMES,
    ROOT,
    PackageNode,
    RootType,
    SolutionGraph,
    SolverSpec,
    Violation,
    cargo_consistent,
    check_graph,
    cost_cve,
    cost_duplicates,
    cost_num_deps,
    cost_oldness,
    cost_vector,
    find_cycle,
    graph_sort_key,
    mean_oldness,
    node_sort_key,
    nodups_consistent,
    npm_consistent,
    oldness,
)
from .lockfile import dumps_lockfile, graph_to_lockfile, parse_lockfile
from .oracle import DEFAULT_LIMIT, CapacityError, enumerate_valid, oracle_solve
from .registry import (
    Advisory,
    Dependency,
    LoadError,
    PackageNotFound,
    Registry,
    RootManifest,
    dump_registry,
    load_advisories,
    load_manifest,
    load_registry,
    reachable_packages,
)
from .semver import (
    ANY,
    AnyVersion,
    AtLeast,
    AtMost,
    Caret,
    Conjunction,
    Constraint,
    Disjunction,
    Exact,
    ParseError,
    Tilde,
    Version,
    compare_versions,
    format_constraint,
    parse_constraint,
    parse_version,
    sat,
)
from .solver import (
    Sketch,
    SketchNode,
    Slot,
    Timeout,
    Unsat,
    build_sketch,
    lexicographic_minimize,
    solve,
)

__version__ = "0.1.0"
