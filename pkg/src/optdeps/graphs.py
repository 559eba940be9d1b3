"""Solution graphs, validity conditions, consistency rules, and cost functions.

A solution graph has one distinguished root node plus zero or more
(package, version) nodes.  Each node carries an ordered edge vector with one
target per declared dependency.  Validity is the conjunction of six
conditions, checked here one by one so that reports can name the condition
that failed:

1. the root is included;
2. every included node is reachable from the root along edges;
3. every node has exactly one edge per declared dependency, and every edge
   lands on an included node;
4. every edge points at the declared package name with a satisfying version;
5. every same-package pair of included versions passes the configured
   consistency rule;
6. the graph is acyclic unless cycles are allowed.

All cost functions return exact rationals and ignore the root node.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Callable, Iterable, Mapping, Sequence

from .registry import Advisory, Registry, RootManifest
from .semver import Version, compare_versions, format_constraint, sat

__all__ = [
    "CONSISTENCY_RULES",
    "OBJECTIVE_NAMES",
    "ROOT",
    "PackageNode",
    "RootType",
    "SolutionGraph",
    "SolverSpec",
    "Violation",
    "cargo_consistent",
    "check_graph",
    "cost_cve",
    "cost_duplicates",
    "cost_num_deps",
    "cost_oldness",
    "cost_vector",
    "find_cycle",
    "graph_sort_key",
    "mean_oldness",
    "node_sort_key",
    "nodups_consistent",
    "npm_consistent",
    "oldness",
]


@dataclass(frozen=True)
class RootType:
    """The distinguished project node."""

    def __repr__(self) -> str:
        return "ROOT"


ROOT = RootType()

PackageNode = tuple[str, Version]
# node identifiers are ROOT or PackageNode tuples
NodeId = RootType | PackageNode


def _node_str(node: NodeId) -> str:
    if isinstance(node, RootType):
        return "root"
    return f"{node[0]}@{node[1]}"


@dataclass(frozen=True)
class SolutionGraph:
    nodes: frozenset
    edges: dict

    @staticmethod
    def build(
        nodes: Iterable[NodeId], edges: Mapping[NodeId, Sequence[NodeId]]
    ) -> "SolutionGraph":
        return SolutionGraph(
            frozenset(nodes), {node: tuple(targets) for node, targets in edges.items()}
        )

    def package_nodes(self) -> list[PackageNode]:
        """Non-root nodes in canonical order: name ascending, version descending."""
        return sorted(
            (node for node in self.nodes if not isinstance(node, RootType)),
            key=node_sort_key,
        )


@total_ordering
class _Desc:
    """Wraps a version so that sort keys order versions newest-first."""

    __slots__ = ("version",)

    def __init__(self, version: Version) -> None:
        self.version = version

    def __eq__(self, other: object) -> bool:
        return compare_versions(self.version, other.version) == 0

    def __lt__(self, other: "_Desc") -> bool:
        return compare_versions(self.version, other.version) > 0


def node_sort_key(node: PackageNode):
    return (node[0], _Desc(node[1]))


def graph_sort_key(graph: SolutionGraph):
    """Deterministic total order over graphs sharing a registry.

    Node multiset first (canonical node order, shorter prefix wins), then the
    edge vectors read off in canonical node order with the root first.  Used
    to break ties between equal-cost optima.
    """
    package_nodes = graph.package_nodes()
    nodes_key = tuple(node_sort_key(node) for node in package_nodes)
    edges_key = tuple(
        tuple(node_sort_key(target) for target in graph.edges.get(node, ()))
        for node in [ROOT, *package_nodes]
    )
    return (nodes_key, edges_key)


# --- consistency rules ------------------------------------------------------


def npm_consistent(a: Version, b: Version) -> bool:
    return True


def nodups_consistent(a: Version, b: Version) -> bool:
    return compare_versions(a, b) == 0


def cargo_consistent(a: Version, b: Version) -> bool:
    """Two versions of one package may co-exist only if no builder would ever
    unify them: prereleases are ignored and only the triple is examined."""
    if a.major == 0 and b.major == 0:
        if a.minor == 0 and b.minor == 0:
            return True
        if a.minor == b.minor:
            return a.patch == b.patch
        return True
    if a.major == b.major:
        return a.minor == b.minor and a.patch == b.patch
    return True


CONSISTENCY_RULES: dict[str, Callable[[Version, Version], bool]] = {
    "npm": npm_consistent,
    "no_dups": nodups_consistent,
    "cargo": cargo_consistent,
}

OBJECTIVE_NAMES = ("min_oldness", "min_num_deps", "min_duplicates", "min_cve")


@dataclass(frozen=True)
class SolverSpec:
    """Solver configuration: consistency rule, prioritized objectives,
    cyclicity, and wall-clock budget in seconds."""

    consistency: str = "npm"
    objectives: tuple[str, ...] = ("min_oldness",)
    allow_cycles: bool = True
    timeout: float = 600.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "objectives", tuple(self.objectives))
        if self.consistency not in CONSISTENCY_RULES:
            raise ValueError(f"unknown consistency rule: {self.consistency!r}")
        if not self.objectives:
            raise ValueError("objective list must be non-empty")
        for name in self.objectives:
            if name not in OBJECTIVE_NAMES:
                raise ValueError(f"unknown objective: {name!r}")
        if len(set(self.objectives)) != len(self.objectives):
            raise ValueError("objective list has duplicates")


# --- validity ---------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    condition: int
    message: str

    def __str__(self) -> str:
        return f"condition {self.condition}: {self.message}"


def _declared_dependencies(registry: Registry, root: RootManifest, node: NodeId):
    if isinstance(node, RootType):
        return root.dependencies
    name, version = node
    if not registry.has_version(name, version):
        return None
    return registry.dependencies(name, version)


def find_cycle(graph: SolutionGraph) -> list[NodeId] | None:
    """A directed cycle through included nodes, or None.  Iterative DFS."""
    WHITE, GREY, BLACK = 0, 1, 2
    color: dict[NodeId, int] = {node: WHITE for node in graph.nodes}
    parent: dict[NodeId, NodeId] = {}
    for start in [ROOT, *graph.package_nodes()]:
        if start not in color or color[start] != WHITE:
            continue
        stack: list[tuple[NodeId, int]] = [(start, 0)]
        color[start] = GREY
        while stack:
            node, i = stack[-1]
            targets = [t for t in graph.edges.get(node, ()) if t in color]
            if i == len(targets):
                color[node] = BLACK
                stack.pop()
                continue
            stack[-1] = (node, i + 1)
            target = targets[i]
            if color[target] == GREY:
                # unwind the grey path into an explicit cycle
                cycle = [target]
                cursor = node
                while cursor != target:
                    cycle.append(cursor)
                    cursor = parent[cursor]
                cycle.append(target)
                cycle.reverse()
                return cycle
            if color[target] == WHITE:
                color[target] = GREY
                parent[target] = node
                stack.append((target, 0))
    return None


def check_graph(
    registry: Registry, root: RootManifest, spec: SolverSpec, graph: SolutionGraph
) -> list[Violation]:
    """All violations of the six validity conditions; empty means valid."""
    out: list[Violation] = []

    if ROOT not in graph.nodes:
        out.append(Violation(1, "the root node is not included"))

    package_nodes = graph.package_nodes()
    ordered: list[NodeId] = ([ROOT] if ROOT in graph.nodes else []) + package_nodes

    # condition 2: directed reachability from the root
    reached: set[NodeId] = set()
    if ROOT in graph.nodes:
        stack: list[NodeId] = [ROOT]
        reached.add(ROOT)
        while stack:
            node = stack.pop()
            for target in graph.edges.get(node, ()):
                if target in graph.nodes and target not in reached:
                    reached.add(target)
                    stack.append(target)
    for node in package_nodes:
        if node not in reached:
            out.append(Violation(2, f"{_node_str(node)} is not reachable from the root"))

    # conditions 3 and 4, node by node, edge by edge
    for node in ordered:
        declared = _declared_dependencies(registry, root, node)
        if declared is None:
            out.append(Violation(3, f"{_node_str(node)} is not present in the registry"))
            continue
        edges = graph.edges.get(node)
        if edges is None:
            out.append(Violation(3, f"{_node_str(node)} has no edge vector"))
            continue
        if len(edges) != len(declared):
            out.append(
                Violation(
                    3,
                    f"{_node_str(node)} has {len(edges)} edges for "
                    f"{len(declared)} declared dependencies",
                )
            )
            continue
        for i, (target, dep) in enumerate(zip(edges, declared)):
            if isinstance(target, RootType):
                out.append(Violation(4, f"{_node_str(node)} slot {i} resolves to the root"))
                continue
            target_name, target_version = target
            if target not in graph.nodes:
                out.append(
                    Violation(
                        3,
                        f"{_node_str(node)} slot {i} dangles: "
                        f"{_node_str(target)} is not included",
                    )
                )
                continue
            if target_name != dep.name:
                out.append(
                    Violation(
                        4,
                        f"{_node_str(node)} slot {i} names {target_name}, "
                        f"declared {dep.name}",
                    )
                )
                continue
            if not sat(dep.constraint, target_version):
                out.append(
                    Violation(
                        4,
                        f"{_node_str(node)} slot {i}: {_node_str(target)} does not "
                        f"satisfy {format_constraint(dep.constraint)}",
                    )
                )
    for node in graph.edges:
        if node not in graph.nodes:
            out.append(Violation(3, f"edge vector for absent node {_node_str(node)}"))

    # condition 5: pairwise same-package consistency
    rule = CONSISTENCY_RULES[spec.consistency]
    by_name: dict[str, list[Version]] = {}
    for name, version in package_nodes:
        by_name.setdefault(name, []).append(version)
    for name, versions in by_name.items():
        for i in range(len(versions)):
            for j in range(i + 1, len(versions)):
                if not rule(versions[i], versions[j]):
                    out.append(
                        Violation(
                            5,
                            f"{name}: versions {versions[i]} and {versions[j]} "
                            f"violate the {spec.consistency} consistency rule",
                        )
                    )

    # condition 6: acyclicity when cycles are disallowed
    if not spec.allow_cycles:
        cycle = find_cycle(graph)
        if cycle is not None:
            shown = " -> ".join(_node_str(node) for node in cycle)
            out.append(Violation(6, f"dependency cycle: {shown}"))

    return out


# --- cost functions ---------------------------------------------------------


def oldness(registry: Registry, name: str, version: Version) -> Fraction:
    """Rank of a version counted from the newest, normalized to [0, 1].

    The newest version scores 0, the oldest scores 1, and a package with a
    single version scores 0.  Position is taken in the full version order,
    never in upload order.
    """
    versions = registry.sorted_versions(name)
    if len(versions) == 1:
        return Fraction(0)
    return Fraction(versions.index(version), len(versions) - 1)


def cost_num_deps(graph: SolutionGraph) -> Fraction:
    return Fraction(sum(1 for node in graph.nodes if not isinstance(node, RootType)))


def cost_duplicates(graph: SolutionGraph) -> Fraction:
    counts = Counter(name for name, _ in graph.package_nodes())
    return Fraction(sum(max(0, count - 1) for count in counts.values()))


def cost_oldness(graph: SolutionGraph, registry: Registry) -> Fraction:
    return sum(
        (oldness(registry, name, version) for name, version in graph.package_nodes()),
        Fraction(0),
    )


def cost_cve(graph: SolutionGraph, advisories: Sequence[Advisory]) -> Fraction:
    """Sum of advisory scores over included nodes; each vulnerable node counts
    once no matter how many edges point at it."""
    total = Fraction(0)
    for name, version in graph.package_nodes():
        for advisory in advisories:
            if advisory.package == name and sat(advisory.affected, version):
                total += advisory.cvss
    return total


def mean_oldness(graph: SolutionGraph, registry: Registry) -> Fraction:
    package_nodes = graph.package_nodes()
    if not package_nodes:
        return Fraction(0)
    return cost_oldness(graph, registry) / len(package_nodes)


def cost_vector(
    graph: SolutionGraph,
    spec: SolverSpec,
    registry: Registry,
    advisories: Sequence[Advisory] = (),
) -> tuple[Fraction, ...]:
    """Exact cost of a graph under the spec's prioritized objectives."""
    out = []
    for objective in spec.objectives:
        if objective == "min_num_deps":
            out.append(cost_num_deps(graph))
        elif objective == "min_duplicates":
            out.append(cost_duplicates(graph))
        elif objective == "min_oldness":
            out.append(cost_oldness(graph, registry))
        elif objective == "min_cve":
            out.append(cost_cve(graph, advisories))
        else:  # unreachable: SolverSpec validates names
            raise ValueError(f"unknown objective: {objective!r}")
    return tuple(out)
