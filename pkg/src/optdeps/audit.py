"""Vulnerability reporting over solution graphs.

An advisory hits a node when the package names match and the node's version
satisfies the advisory's affected range; the same ``sat`` that resolves
dependencies decides this, so the audit total always equals the cve cost the
solver minimizes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .graphs import SolutionGraph
from .registry import Advisory
from .semver import Version, sat

__all__ = [
    "AuditReport",
    "NodeAudit",
    "ReportDelta",
    "affected",
    "audit_report",
    "compare_reports",
    "format_fraction",
    "report_to_json",
]


def affected(advisory: Advisory, package: str, version: Version) -> bool:
    return advisory.package == package and sat(advisory.affected, version)


@dataclass(frozen=True)
class NodeAudit:
    package: str
    version: Version
    advisories: tuple[str, ...]
    subtotal: Fraction


@dataclass(frozen=True)
class AuditReport:
    total: Fraction
    nodes: tuple[NodeAudit, ...]


def audit_report(graph: SolutionGraph, advisories: Sequence[Advisory]) -> AuditReport:
    """Per-node advisory hits in canonical node order, plus the exact total.

    Stable under advisory reordering: hits are sorted by advisory id.
    """
    nodes = []
    total = Fraction(0)
    for name, version in graph.package_nodes():
        hits = sorted(
            (advisory for advisory in advisories if affected(advisory, name, version)),
            key=lambda advisory: advisory.id,
        )
        subtotal = sum((advisory.cvss for advisory in hits), Fraction(0))
        nodes.append(NodeAudit(name, version, tuple(advisory.id for advisory in hits), subtotal))
        total += subtotal
    return AuditReport(total, tuple(nodes))


@dataclass(frozen=True)
class ReportDelta:
    total_delta: Fraction
    added: tuple[str, ...]
    removed: tuple[str, ...]


def _advisory_ids(report: AuditReport) -> set[str]:
    return {advisory_id for node in report.nodes for advisory_id in node.advisories}


def compare_reports(before: AuditReport, after: AuditReport) -> ReportDelta:
    """Exact score delta and the advisory ids that appeared or disappeared."""
    before_ids = _advisory_ids(before)
    after_ids = _advisory_ids(after)
    return ReportDelta(
        after.total - before.total,
        tuple(sorted(after_ids - before_ids)),
        tuple(sorted(before_ids - after_ids)),
    )


def format_fraction(value: Fraction) -> str:
    """Exact decimal text when the reduced denominator is 2^a * 5^b, else p/q."""
    denominator = value.denominator
    twos = fives = 0
    while denominator % 2 == 0:
        denominator //= 2
        twos += 1
    while denominator % 5 == 0:
        denominator //= 5
        fives += 1
    if denominator != 1:
        return f"{value.numerator}/{value.denominator}"
    places = max(twos, fives)
    scaled = abs(value.numerator) * 10**places // value.denominator
    sign = "-" if value < 0 else ""
    if places == 0:
        return f"{sign}{scaled}"
    digits = str(scaled).rjust(places + 1, "0")
    whole, fractional = digits[:-places], digits[-places:]
    fractional = fractional.rstrip("0")
    return f"{sign}{whole}.{fractional}" if fractional else f"{sign}{whole}"


def report_to_json(report: AuditReport) -> dict:
    return {
        "total": format_fraction(report.total),
        "nodes": [
            {
                "package": node.package,
                "version": str(node.version),
                "advisories": list(node.advisories),
                "subtotal": format_fraction(node.subtotal),
            }
            for node in report.nodes
        ],
    }
