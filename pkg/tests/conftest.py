import sys
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"

CRITERIA = {
    1: "round trip over the fixture corpus",
    2: "tokenize/detokenize identity",
    3: "example sentence tokenization",
    4: "perplexity gate and fallback fraction",
    5: "BLEU oracle",
    6: "glossary filter on planted corpus",
    7: "split determinism",
    8: "French conventions",
    9: "end-to-end translation",
}

_outcomes: dict[int, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion exercised by the test")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    for n in getattr(report, "criteria", ()):
        _outcomes.setdefault(n, []).append(report.passed)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    report.criteria = [m.args[0] for m in item.iter_markers("criterion")]


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n, label in CRITERIA.items():
        results = _outcomes.get(n)
        if results is None:
            status = "NOT RUN"
        else:
            status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status} - {label} ({len(results or [])} checks)")


@pytest.fixture
def fixtures_dir():
    return FIXTURES


sys.path.insert(0, str(Path(__file__).parent))
