"""Canonical lockfile serialization.

A lockfile pins one solution graph: the root's resolved targets plus every
included (package, version) node with its resolved targets, all in slot
order.  Serialization is canonical (sorted keys, two-space indent, nodes in
canonical node order, trailing newline) so equal graphs always produce
byte-identical files.
"""

from __future__ import annotations

import json

from .graphs import ROOT, SolutionGraph
from .registry import LoadError, load_json
from .semver import ParseError, parse_version

__all__ = ["dumps_lockfile", "graph_to_lockfile", "parse_lockfile"]


def _dep_pairs(targets) -> list[list[str]]:
    return [[name, str(version)] for name, version in targets]


def graph_to_lockfile(graph: SolutionGraph) -> dict:
    return {
        "root": {"deps": _dep_pairs(graph.edges.get(ROOT, ()))},
        "nodes": [
            {
                "package": name,
                "version": str(version),
                "deps": _dep_pairs(graph.edges.get((name, version), ())),
            }
            for name, version in graph.package_nodes()
        ],
    }


def dumps_lockfile(graph: SolutionGraph) -> str:
    return json.dumps(graph_to_lockfile(graph), indent=2, sort_keys=True) + "\n"


def _target_list(entries: object, where: str) -> tuple:
    if not isinstance(entries, list):
        raise LoadError(f"{where}: deps must be an array")
    targets = []
    for i, entry in enumerate(entries):
        if (
            not isinstance(entry, list)
            or len(entry) != 2
            or not all(isinstance(part, str) for part in entry)
        ):
            raise LoadError(f"{where}/deps/{i}: expected [name, version] strings")
        name, version_text = entry
        try:
            targets.append((name, parse_version(version_text)))
        except ParseError as exc:
            raise LoadError(f"{where}/deps/{i}: {exc}") from None
    return tuple(targets)


def parse_lockfile(text: str) -> SolutionGraph:
    """Rebuild the pinned graph.  Dangling targets are preserved verbatim so
    that validity checking can flag them."""
    doc = load_json(text)
    if not isinstance(doc, dict):
        raise LoadError("lockfile document must be an object")
    root_entry = doc.get("root")
    if not isinstance(root_entry, dict):
        raise LoadError('lockfile document needs a "root" object')
    node_entries = doc.get("nodes")
    if not isinstance(node_entries, list):
        raise LoadError('lockfile document needs a "nodes" array')

    nodes = [ROOT]
    edges = {ROOT: _target_list(root_entry.get("deps", []), "root")}
    for i, entry in enumerate(node_entries):
        where = f"nodes/{i}"
        if not isinstance(entry, dict):
            raise LoadError(f"{where}: expected an object")
        name, version_text = entry.get("package"), entry.get("version")
        if not isinstance(name, str) or not isinstance(version_text, str):
            raise LoadError(f'{where}: "package" and "version" must be strings')
        try:
            version = parse_version(version_text)
        except ParseError as exc:
            raise LoadError(f"{where}: {exc}") from None
        node = (name, version)
        if node in edges:
            raise LoadError(f"{where}: duplicate node {name}@{version}")
        nodes.append(node)
        edges[node] = _target_list(entry.get("deps", []), where)
    return SolutionGraph.build(nodes, edges)
