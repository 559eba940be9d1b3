from __future__ import annotations

import sys
from pathlib import Path

import pytest

# experiment scripts are imported by tests (scale-registry generator)
sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "scripts"))

_ACCEPTANCE_FILE = "test_acceptance.py"
_acceptance_results: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if _ACCEPTANCE_FILE not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call":
        _acceptance_results[name] = "PASS" if report.passed else "FAIL"
    elif report.when == "setup" and (report.failed or report.skipped):
        _acceptance_results[name] = "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance_results):
        terminalreporter.write_line(f"{name}: {_acceptance_results[name]}")


@pytest.fixture(scope="session")
def corpus_entries():
    from corpus import build_corpus

    return build_corpus(500)


@pytest.fixture(scope="session")
def corpus_objects(corpus_entries):
    from corpus import load_corpus_objects

    return load_corpus_objects(corpus_entries)
