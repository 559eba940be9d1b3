"""Exhaustive ground-truth solver for small instances.

Enumerates candidate solution graphs outright, keeps exactly those that
``check_graph`` accepts, and ranks them by exact cost with the same canonical
tie-break the search engine uses.  Intended for certifying the engine on
small universes, so it refuses instances whose enumeration would exceed a
configured assignment budget instead of running forever.

Two enumeration strategies are provided.  The default walks subsets of
candidate nodes and only materializes slot assignments inside the chosen
subset, skipping subsets that already break the consistency rule.  The
``pruned=False`` strategy is maximally naive: every node independently picks
excluded-or-some-assignment over all registry versions with no filtering at
all, and validity does every bit of the work.  Both must yield the same
valid-graph multiset; the test suite checks they do.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Sequence

from .graphs import (
    CONSISTENCY_RULES,
    ROOT,
    NodeId,
    SolutionGraph,
    SolverSpec,
    check_graph,
    cost_vector,
)
from .registry import Advisory, Registry, RootManifest
from .semver import Version, sat
from .solver import Cost, Sketch, Unsat, build_sketch, lexicographic_minimize

__all__ = ["DEFAULT_LIMIT", "CapacityError", "enumerate_valid", "oracle_solve"]

DEFAULT_LIMIT = 10_000_000


class CapacityError(RuntimeError):
    """The instance is too large to certify by enumeration."""


def enumerate_valid(
    registry: Registry,
    root: RootManifest,
    spec: SolverSpec,
    advisories: Sequence[Advisory] = (),
    limit: int = DEFAULT_LIMIT,
    pruned: bool = True,
) -> Iterator[tuple[SolutionGraph, Cost]]:
    """Every valid solution graph with its exact cost vector.

    Deterministic order.  Raises CapacityError before yielding anything if
    the assignment count would exceed ``limit``.
    """
    sketch = build_sketch(registry, root)
    if pruned:
        return _enumerate_subsets(registry, root, spec, advisories, limit, sketch)
    return _enumerate_naive(registry, root, spec, advisories, limit, sketch)


def _slot_lists(sketch: Sketch) -> dict[NodeId, tuple]:
    return {
        sketch_node.node: sketch_node.slots
        for sketch_node in (sketch.root, *sketch.package_nodes)
    }


def _enumerate_subsets(
    registry: Registry,
    root: RootManifest,
    spec: SolverSpec,
    advisories: Sequence[Advisory],
    limit: int,
    sketch: Sketch,
) -> Iterator[tuple[SolutionGraph, Cost]]:
    nodes = [sketch_node.node for sketch_node in sketch.package_nodes]
    count = len(nodes)
    if 2**count > limit:
        raise CapacityError(f"{2**count} node subsets exceed the budget of {limit}")
    index = {node: i for i, node in enumerate(nodes)}
    slots = _slot_lists(sketch)
    rule = CONSISTENCY_RULES[spec.consistency]

    # per slot, the bitmask of candidate nodes whose version satisfies it
    masks: dict[tuple[NodeId, int], int] = {}
    for node, node_slots in slots.items():
        for k, slot in enumerate(node_slots):
            mask = 0
            for version in slot.candidates:
                if sat(slot.constraint, version):
                    mask |= 1 << index[(slot.target, version)]
            masks[(node, k)] = mask

    def subset_assignments(mask: int) -> int:
        total = 1
        for member in _members(mask, nodes):
            for k in range(len(slots[member])):
                total *= (masks[(member, k)] & mask).bit_count()
                if total == 0:
                    return 0
        for k in range(len(slots[ROOT])):
            total *= (masks[(ROOT, k)] & mask).bit_count()
            if total == 0:
                return 0
        return total

    def subset_consistent(mask: int) -> bool:
        members = _members(mask, nodes)
        for i in range(len(members)):
            name_i, version_i = members[i]
            for j in range(i + 1, len(members)):
                name_j, version_j = members[j]
                if name_i == name_j and not rule(version_i, version_j):
                    return False
        return True

    # first pass: refuse oversized instances before yielding anything
    total = 0
    for mask in range(2**count):
        assignments = subset_assignments(mask)
        if assignments and subset_consistent(mask):
            total += assignments
            if total > limit:
                raise CapacityError(
                    f"more than {limit} candidate assignments; "
                    f"instance too large to certify"
                )

    return _yield_subsets(
        registry, root, spec, advisories, sketch, nodes, index, slots, masks
    )


def _members(mask: int, nodes: list) -> list:
    return [nodes[i] for i in range(len(nodes)) if mask >> i & 1]


def _yield_subsets(
    registry: Registry,
    root: RootManifest,
    spec: SolverSpec,
    advisories: Sequence[Advisory],
    sketch: Sketch,
    nodes: list,
    index: dict,
    slots: dict,
    masks: dict,
) -> Iterator[tuple[SolutionGraph, Cost]]:
    rule = CONSISTENCY_RULES[spec.consistency]
    for mask in range(2 ** len(nodes)):
        members = _members(mask, nodes)
        ok = True
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                if members[i][0] == members[j][0] and not rule(
                    members[i][1], members[j][1]
                ):
                    ok = False
        if not ok:
            continue
        ordered: list[NodeId] = [ROOT, *members]
        option_lists = []
        for node in ordered:
            for k in range(len(slots[node])):
                available = masks[(node, k)] & mask
                option_lists.append(_members(available, nodes))
        if any(not options for options in option_lists):
            continue
        node_set = frozenset(ordered)
        for assignment in itertools.product(*option_lists):
            edges: dict[NodeId, tuple] = {}
            cursor = 0
            for node in ordered:
                width = len(slots[node])
                edges[node] = tuple(assignment[cursor : cursor + width])
                cursor += width
            graph = SolutionGraph(node_set, edges)
            if not check_graph(registry, root, spec, graph):
                yield graph, cost_vector(graph, spec, registry, advisories)


def _enumerate_naive(
    registry: Registry,
    root: RootManifest,
    spec: SolverSpec,
    advisories: Sequence[Advisory],
    limit: int,
    sketch: Sketch,
) -> Iterator[tuple[SolutionGraph, Cost]]:
    slots = _slot_lists(sketch)

    def node_states(node: NodeId) -> list:
        """None for excluded, else one full slot assignment."""
        option_lists = [slot.candidates for slot in slots[node]]
        assignments = [
            tuple((slot.target, version) for slot, version in zip(slots[node], choice))
            for choice in itertools.product(*option_lists)
        ]
        if isinstance(node, tuple):
            return [None, *assignments]
        return assignments  # the root is never excluded

    nodes: list[NodeId] = [ROOT, *(sketch_node.node for sketch_node in sketch.package_nodes)]
    total = 1
    for node in nodes:
        total *= len(node_states(node))
        if total > limit:
            raise CapacityError(
                f"more than {limit} candidate assignments; instance too large to certify"
            )

    def generate() -> Iterator[tuple[SolutionGraph, Cost]]:
        for combo in itertools.product(*(node_states(node) for node in nodes)):
            included = [
                node for node, state in zip(nodes, combo) if state is not None
            ]
            edges = {
                node: state
                for node, state in zip(nodes, combo)
                if state is not None
            }
            graph = SolutionGraph.build(included, edges)
            if not check_graph(registry, root, spec, graph):
                yield graph, cost_vector(graph, spec, registry, advisories)

    return generate()


def oracle_solve(
    registry: Registry,
    root: RootManifest,
    spec: SolverSpec,
    advisories: Sequence[Advisory] = (),
    limit: int = DEFAULT_LIMIT,
) -> SolutionGraph | Unsat:
    """Certified optimum by exhaustive enumeration, or Unsat."""
    best = lexicographic_minimize(
        enumerate_valid(registry, root, spec, advisories, limit)
    )
    if best is None:
        return Unsat()
    return best[0]
