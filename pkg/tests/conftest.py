import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from omstate.corpus import ie_corpus, lattices, star_corpus  # noqa: E402

_acceptance: dict[str, str] = {}


@pytest.fixture(scope="session")
def lat():
    return lattices()


@pytest.fixture(scope="session")
def ie_algebras():
    return ie_corpus()


@pytest.fixture(scope="session")
def star_algebras():
    return star_corpus()


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or report.outcome != "passed":
        if report.outcome == "failed" or name not in _acceptance:
            _acceptance[name] = "PASS" if report.outcome == "passed" else report.outcome.upper()


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        terminalreporter.write_line(f"{_acceptance[name]:5} {name}")
