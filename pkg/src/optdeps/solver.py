"""Exact lexicographic branch-and-bound over solution graphs.

The search space is spanned by a sketch: the root node plus one candidate node
per (package, version) reachable from the root's manifest, each carrying one
slot per declared dependency.  A solution is built by resolving slots in FIFO
order starting from the root's slots; a node's slots join the queue the first
time an edge lands on it.  Because every valid graph is connected (condition
2), every valid graph arises this way exactly once, so the enumeration is
complete, and every fully resolved state is valid by construction.

Costs are exact rational vectors ordered lexicographically.  Branches are cut
only when an admissible lower bound is strictly worse than the incumbent, so
ties survive to be broken by the canonical graph order; the returned optimum
is therefore the unique minimum of (cost, graph_sort_key) over all valid
graphs, matching the exhaustive oracle graph-for-graph.

The lower bound adds, for each package that is pending in some unresolved slot
and has no included version yet, the componentwise maximum over that package's
slots of the componentwise minimum cost any satisfying candidate could
contribute.  Contributions never decrease as nodes are added (all objectives
are monotone in the included node set), so the bound is admissible.
"""

from __future__ import annotations

import sys
import time
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence, TypeVar

from .graphs import (
    CONSISTENCY_RULES,
    ROOT,
    NodeId,
    PackageNode,
    SolutionGraph,
    SolverSpec,
    check_graph,
    cost_vector,
    graph_sort_key,
    oldness,
)
from .registry import Advisory, Registry, RootManifest, reachable_packages
from .semver import Constraint, Version, sat

__all__ = [
    "Sketch",
    "SketchNode",
    "Slot",
    "Timeout",
    "Unsat",
    "build_sketch",
    "lexicographic_minimize",
    "solve",
]


@dataclass(frozen=True)
class Slot:
    """One declared dependency awaiting resolution: the target package, the
    range it must satisfy, and every registry version of the target
    (newest first, unfiltered)."""

    target: str
    constraint: Constraint
    candidates: tuple[Version, ...]


@dataclass(frozen=True)
class SketchNode:
    node: NodeId
    slots: tuple[Slot, ...]


@dataclass(frozen=True)
class Sketch:
    """Search skeleton: the root, every reachable candidate node in canonical
    order, and the reachable names the registry does not carry."""

    root: SketchNode
    package_nodes: tuple[SketchNode, ...]
    missing: frozenset[str]


def build_sketch(registry: Registry, root: RootManifest) -> Sketch:
    reachable = reachable_packages(registry, root)
    missing = frozenset(name for name in reachable if name not in registry)

    def slots_for(deps) -> tuple[Slot, ...]:
        return tuple(
            Slot(
                dep.name,
                dep.constraint,
                registry.sorted_versions(dep.name) if dep.name in registry else (),
            )
            for dep in deps
        )

    nodes = []
    for name in sorted(reachable - missing):
        for version in registry.sorted_versions(name):
            nodes.append(
                SketchNode((name, version), slots_for(registry.dependencies(name, version)))
            )
    return Sketch(SketchNode(ROOT, slots_for(root.dependencies)), tuple(nodes), missing)


@dataclass(frozen=True)
class Unsat:
    """No valid solution graph exists.  The fields name what the exhausted
    search ran into: packages whose versions clashed under the consistency
    rule (condition 5), dependency targets no registry version can satisfy
    (conditions 3/4), and whether the acyclicity requirement cut branches
    (condition 6)."""

    conflicts: tuple[str, ...] = ()
    unsatisfied: tuple[str, ...] = ()
    cycle_bound: bool = False

    def describe(self) -> str:
        parts = []
        if self.conflicts:
            parts.append(
                "version-consistency conflicts (condition 5) for: "
                + ", ".join(self.conflicts)
            )
        if self.unsatisfied:
            parts.append(
                "no satisfying version (conditions 3/4) for: "
                + ", ".join(self.unsatisfied)
            )
        if self.cycle_bound:
            parts.append("acyclicity requirement cut candidate branches (condition 6)")
        if not parts:
            parts.append("no valid solution graph exists")
        return "; ".join(parts)


@dataclass(frozen=True)
class Timeout:
    """Budget exhausted before the search space was covered.  The incumbent,
    when present, is valid but not certified optimal."""

    incumbent: SolutionGraph | None
    elapsed: float


T = TypeVar("T")
Cost = tuple[Fraction, ...]


def lexicographic_minimize(
    candidates: Iterable[tuple[T, Cost]],
    tie_key: Callable[[T], object] = graph_sort_key,
) -> tuple[T, Cost] | None:
    """The unique minimum of (cost, tie_key(item)), or None if empty.

    Equivalent to minimizing the first objective, then the second within that
    optimum, and so on, with the tie key ordering equal-cost items.
    """
    best: tuple[T, Cost] | None = None
    best_key = None
    for item, cost in candidates:
        if best is None or cost < best[1]:
            best, best_key = (item, cost), None
        elif cost == best[1]:
            if best_key is None:
                best_key = tie_key(best[0])
            key = tie_key(item)
            if key < best_key:
                best, best_key = (item, cost), key
    return best


class _SearchTimeout(Exception):
    pass


class _Search:
    def __init__(
        self,
        registry: Registry,
        root: RootManifest,
        spec: SolverSpec,
        advisories: Sequence[Advisory],
    ) -> None:
        self.registry = registry
        self.root = root
        self.spec = spec
        self.advisories = advisories
        self.consistent = CONSISTENCY_RULES[spec.consistency]
        self.objectives = spec.objectives
        self.dup_index = (
            spec.objectives.index("min_duplicates")
            if "min_duplicates" in spec.objectives
            else None
        )
        self.sketch = build_sketch(registry, root)
        self.by_node: dict[NodeId, SketchNode] = {
            sketch_node.node: sketch_node for sketch_node in self.sketch.package_nodes
        }
        self.by_node[ROOT] = self.sketch.root

        by_package: dict[str, list[Advisory]] = {}
        for advisory in advisories:
            by_package.setdefault(advisory.package, []).append(advisory)
        self.contribution: dict[PackageNode, Cost] = {}
        for sketch_node in self.sketch.package_nodes:
            name, version = sketch_node.node
            vector = []
            for objective in self.objectives:
                if objective == "min_num_deps":
                    vector.append(Fraction(1))
                elif objective == "min_oldness":
                    vector.append(oldness(registry, name, version))
                elif objective == "min_cve":
                    vector.append(
                        sum(
                            (
                                advisory.cvss
                                for advisory in by_package.get(name, ())
                                if sat(advisory.affected, version)
                            ),
                            Fraction(0),
                        )
                    )
                else:  # min_duplicates is state-dependent, handled at inclusion
                    vector.append(Fraction(0))
            self.contribution[sketch_node.node] = tuple(vector)

        # per slot: the satisfying candidates (newest first) and the
        # componentwise-minimum contribution any of them could add
        self.slot_options: dict[tuple[NodeId, int], tuple[Version, ...]] = {}
        self.slot_floor: dict[tuple[NodeId, int], tuple[str, Cost | None]] = {}
        for sketch_node in (self.sketch.root, *self.sketch.package_nodes):
            for k, slot in enumerate(sketch_node.slots):
                options = tuple(
                    version for version in slot.candidates if sat(slot.constraint, version)
                )
                self.slot_options[(sketch_node.node, k)] = options
                floor: Cost | None = None
                if options:
                    vectors = [self.contribution[(slot.target, version)] for version in options]
                    floor = tuple(min(column) for column in zip(*vectors))
                self.slot_floor[(sketch_node.node, k)] = (slot.target, floor)

        # mutable search state
        self.slots: list[tuple[NodeId, int]] = []
        self.included: dict[NodeId, None] = {}
        self.included_versions: dict[str, list[Version]] = {}
        self.adjacency: dict[NodeId, list[NodeId]] = {}
        self.cost: list[Fraction] = [Fraction(0)] * len(self.objectives)
        self.best_graph: SolutionGraph | None = None
        self.best_cost: Cost | None = None
        self.best_key = None

        self.conflicts: set[str] = set()
        self.unsatisfied: set[str] = set()
        self.cycle_bound = False
        self.deadline = 0.0

    def run(self) -> SolutionGraph | Unsat | Timeout:
        started = time.monotonic()
        self.deadline = started + self.spec.timeout
        self.included[ROOT] = None
        self.adjacency[ROOT] = []
        self.slots.extend((ROOT, k) for k in range(len(self.sketch.root.slots)))

        total_slots = sum(
            len(sketch_node.slots)
            for sketch_node in (self.sketch.root, *self.sketch.package_nodes)
        )
        needed = total_slots + 200
        old_limit = sys.getrecursionlimit()
        if needed > old_limit:
            sys.setrecursionlimit(needed)
        try:
            self._dfs(0)
        except _SearchTimeout:
            return Timeout(self.best_graph, time.monotonic() - started)
        finally:
            if needed > old_limit:
                sys.setrecursionlimit(old_limit)

        if self.best_graph is None:
            return Unsat(
                tuple(sorted(self.conflicts)),
                tuple(sorted(self.unsatisfied)),
                self.cycle_bound,
            )
        return self.best_graph

    def _dfs(self, i: int) -> None:
        if time.monotonic() > self.deadline:
            raise _SearchTimeout
        bound = self._lower_bound(i)
        if bound is None:
            return
        # strict: equal-cost branches must survive for the canonical tie-break
        if self.best_cost is not None and bound > self.best_cost:
            return
        if i == len(self.slots):
            self._complete()
            return

        node, k = self.slots[i]
        slot = self.by_node[node].slots[k]
        for version in self.slot_options[(node, k)]:
            target: PackageNode = (slot.target, version)
            is_new = target not in self.included
            if is_new and not self._consistent_with_included(slot.target, version):
                continue
            if not self.spec.allow_cycles and not is_new and self._reaches(target, node):
                self.cycle_bound = True
                continue
            self.adjacency[node].append(target)
            if is_new:
                self._include(target)
            self._dfs(i + 1)
            if is_new:
                self._exclude(target)
            self.adjacency[node].pop()

    def _consistent_with_included(self, name: str, version: Version) -> bool:
        for existing in self.included_versions.get(name, ()):
            if not self.consistent(version, existing):
                self.conflicts.add(name)
                return False
        return True

    def _reaches(self, source: NodeId, destination: NodeId) -> bool:
        # would the new edge destination -> ... -> source close a cycle?
        if source == destination:
            return True
        seen = {source}
        stack = [source]
        while stack:
            node = stack.pop()
            for target in self.adjacency.get(node, ()):
                if target == destination:
                    return True
                if target not in seen:
                    seen.add(target)
                    stack.append(target)
        return False

    def _include(self, target: PackageNode) -> None:
        name, version = target
        self.included[target] = None
        versions = self.included_versions.setdefault(name, [])
        if versions and self.dup_index is not None:
            self.cost[self.dup_index] += 1
        versions.append(version)
        for j, x in enumerate(self.contribution[target]):
            self.cost[j] += x
        self.adjacency[target] = []
        self.slots.extend((target, k) for k in range(len(self.by_node[target].slots)))

    def _exclude(self, target: PackageNode) -> None:
        name, version = target
        slot_count = len(self.by_node[target].slots)
        if slot_count:
            del self.slots[-slot_count:]
        del self.adjacency[target]
        for j, x in enumerate(self.contribution[target]):
            self.cost[j] -= x
        versions = self.included_versions[name]
        versions.pop()
        if versions and self.dup_index is not None:
            self.cost[self.dup_index] -= 1
        del self.included[target]

    def _lower_bound(self, i: int) -> Cost | None:
        pending: dict[str, Cost] = {}
        for node, k in self.slots[i:]:
            target, floor = self.slot_floor[(node, k)]
            if floor is None:
                # no registry version can ever satisfy this slot
                self.unsatisfied.add(target)
                return None
            if self.included_versions.get(target):
                continue  # an included version may serve this slot for free
            held = pending.get(target)
            pending[target] = (
                floor if held is None else tuple(max(a, b) for a, b in zip(held, floor))
            )
        bound = list(self.cost)
        for vector in pending.values():
            for j, x in enumerate(vector):
                bound[j] += x
        return tuple(bound)

    def _complete(self) -> None:
        graph = SolutionGraph.build(self.included.keys(), self.adjacency)
        cost = tuple(self.cost)
        recomputed = _recheck(graph, cost, self)
        if recomputed is not None:
            raise AssertionError(recomputed)
        if self.best_cost is None or cost < self.best_cost:
            self.best_graph, self.best_cost = graph, cost
            self.best_key = graph_sort_key(graph)
        elif cost == self.best_cost:
            key = graph_sort_key(graph)
            if key < self.best_key:
                self.best_graph, self.best_key = graph, key


def _recheck(graph: SolutionGraph, cost: Cost, search: _Search) -> str | None:
    """Cross-check a completed state against the declarative definitions."""
    violations = check_graph(search.registry, search.root, search.spec, graph)
    if violations:
        return f"search produced an invalid graph: {violations[0]}"
    declared = cost_vector(graph, search.spec, search.registry, search.advisories)
    if declared != cost:
        return f"incremental cost {cost} diverges from declarative cost {declared}"
    return None


def solve(
    registry: Registry,
    root: RootManifest,
    spec: SolverSpec,
    advisories: Sequence[Advisory] = (),
) -> SolutionGraph | Unsat | Timeout:
    """The provably optimal valid solution graph, an Unsat verdict, or a
    Timeout carrying the best incumbent found within the budget."""
    return _Search(registry, root, spec, advisories).run()
