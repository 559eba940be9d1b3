from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from optdeps import (
    ROOT,
    Advisory,
    SolutionGraph,
    affected,
    audit_report,
    compare_reports,
    cost_cve,
    format_fraction,
    parse_constraint,
    parse_version,
    report_to_json,
)


def N(name, text):
    return (name, parse_version(text))


def adv(ident, package, affected_range, cvss) -> Advisory:
    return Advisory(ident, package, parse_constraint(affected_range), Fraction(cvss))


# --- affected -------------------------------------------------------------------


@pytest.mark.parametrize(
    "package,version,expected",
    [
        ("ms", "1.0.0", True),
        ("ms", "2.1.1", True),
        ("ms", "2.1.2", False),
        ("ms", "3.0.0", False),
        ("not-ms", "1.0.0", False),
    ],
)
def test_affected(package, version, expected):
    advisory = adv("A", "ms", "<2.1.2", Fraction(15, 2))
    assert affected(advisory, package, parse_version(version)) is expected


# --- audit_report ----------------------------------------------------------------


GRAPH = SolutionGraph.build(
    [ROOT, N("web", "2.0.0"), N("ms", "1.0.0"), N("ms", "2.1.2")],
    {
        ROOT: [N("web", "2.0.0")],
        N("web", "2.0.0"): [N("ms", "1.0.0"), N("ms", "2.1.2")],
        N("ms", "1.0.0"): [],
        N("ms", "2.1.2"): [],
    },
)
ADVISORIES = (
    adv("ADV-2", "ms", "<2.1.2", "7.5"),
    adv("ADV-1", "web", ">=2.0.0", "9.8"),
    adv("ADV-3", "ms", "<=1.0.0", 2),
)


def test_audit_report_contents():
    report = audit_report(GRAPH, ADVISORIES)
    # canonical node order: name ascending, version descending
    assert [(n.package, str(n.version)) for n in report.nodes] == [
        ("ms", "2.1.2"),
        ("ms", "1.0.0"),
        ("web", "2.0.0"),
    ]
    clean, old_ms, web = report.nodes
    assert clean.advisories == () and clean.subtotal == 0
    assert old_ms.advisories == ("ADV-2", "ADV-3")  # id order, not input order
    assert old_ms.subtotal == Fraction(19, 2)
    assert web.advisories == ("ADV-1",) and web.subtotal == Fraction(49, 5)
    assert report.total == Fraction(19, 2) + Fraction(49, 5)


def test_audit_total_equals_cve_cost():
    report = audit_report(GRAPH, ADVISORIES)
    assert report.total == cost_cve(GRAPH, ADVISORIES)


def test_report_stable_under_advisory_permutation():
    report = audit_report(GRAPH, ADVISORIES)
    assert report == audit_report(GRAPH, tuple(reversed(ADVISORIES)))


def test_duplicate_vulnerable_versions_each_counted():
    g = SolutionGraph.build([ROOT, N("ms", "1.0.0"), N("ms", "0.9.0")], {})
    advisory = adv("A", "ms", "<2.0.0", "7.5")
    report = audit_report(g, (advisory,))
    assert report.total == 2 * Fraction(15, 2)
    assert all(n.advisories == ("A",) for n in report.nodes)


def test_empty_cases():
    bare = SolutionGraph.build([ROOT], {ROOT: []})
    assert audit_report(bare, ADVISORIES) == audit_report(bare, ())
    assert audit_report(bare, ADVISORIES).total == 0
    assert audit_report(GRAPH, ()).total == 0


# --- compare_reports ---------------------------------------------------------------


def test_compare_reports_upgrade_removes_advisories():
    # six copies of one 9.9-scored advisory hit before the upgrade
    nodes = [N(f"p{i}", "1.0.0") for i in range(6)]
    before_graph = SolutionGraph.build([ROOT, *nodes], {})
    advisories = tuple(adv(f"ADV-{i}", f"p{i}", "<2.0.0", "9.9") for i in range(6))
    before = audit_report(before_graph, advisories)
    assert before.total == Fraction(297, 5)  # 59.4, exactly

    after_graph = SolutionGraph.build([ROOT, *(N(f"p{i}", "2.0.0") for i in range(6))], {})
    after = audit_report(after_graph, advisories)
    delta = compare_reports(before, after)
    assert delta.total_delta == -Fraction(297, 5)
    assert delta.added == ()
    assert delta.removed == tuple(f"ADV-{i}" for i in range(6))


def test_compare_reports_mixed():
    g_old = SolutionGraph.build([ROOT, N("a", "1.0.0")], {})
    g_new = SolutionGraph.build([ROOT, N("a", "2.0.0")], {})
    advisories = (adv("OLD", "a", "<2.0.0", "3.1"), adv("NEW", "a", ">=2.0.0", "5.0"))
    delta = compare_reports(audit_report(g_old, advisories), audit_report(g_new, advisories))
    assert delta.total_delta == Fraction(5) - Fraction(31, 10)
    assert delta.added == ("NEW",)
    assert delta.removed == ("OLD",)


def test_compare_reports_identity():
    report = audit_report(GRAPH, ADVISORIES)
    delta = compare_reports(report, report)
    assert delta == type(delta)(Fraction(0), (), ())


# --- formatting ----------------------------------------------------------------------


@pytest.mark.parametrize(
    "value,text",
    [
        (Fraction(0), "0"),
        (Fraction(3), "3"),
        (Fraction(-3), "-3"),
        (Fraction(297, 5), "59.4"),
        (Fraction(1, 4), "0.25"),
        (Fraction(1, 3), "1/3"),
        (Fraction(-49, 5), "-9.8"),
        (Fraction(15, 2), "7.5"),
        (Fraction(1, 8), "0.125"),
        (Fraction(1, 10), "0.1"),
        (Fraction(7, 50), "0.14"),
        (Fraction(22, 7), "22/7"),
        (Fraction(-5, 6), "-5/6"),
        (Fraction(1000001, 1000), "1000.001"),
    ],
)
def test_format_fraction(value, text):
    assert format_fraction(value) == text


@given(
    numerator=st.integers(-10**6, 10**6),
    denominator=st.integers(1, 10**4),
)
def test_format_fraction_roundtrips(numerator, denominator):
    value = Fraction(numerator, denominator)
    text = format_fraction(value)
    assert Fraction(text) == value  # Fraction() parses both decimal and p/q text


def test_report_to_json_shape():
    doc = report_to_json(audit_report(GRAPH, ADVISORIES))
    assert doc["total"] == "19.3"
    assert doc["nodes"][1] == {
        "package": "ms",
        "version": "1.0.0",
        "advisories": ["ADV-2", "ADV-3"],
        "subtotal": "9.5",
    }
    assert [n["package"] for n in doc["nodes"]] == ["ms", "ms", "web"]
