"""Shared fixtures and the acceptance-summary reporting hook."""

from __future__ import annotations

import re
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from expertfuse import ExpertDeclaration

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

REPO_ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture(scope="session")
def repo_root() -> Path:
    return REPO_ROOT


@pytest.fixture(scope="session")
def expert_one() -> ExpertDeclaration:
    """First expert of the running example: "it is A", certainty 0.6."""
    return ExpertDeclaration.says_a(0.6)


@pytest.fixture(scope="session")
def expert_two() -> ExpertDeclaration:
    """Second expert: half A half B, certainties 0.6 and 0.4."""
    return ExpertDeclaration.says_both(0.5, 0.6, 0.4)


# ---------------------------------------------------------------------------
# Acceptance-criteria summary: one PASS/FAIL line per criterion at the end
# of the run, aggregated over parametrized cases.

_CRITERION_PATTERN = re.compile(r"test_criterion_(\d+)")
_criterion_outcomes: dict[int, dict[str, object]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call" or "test_acceptance" not in str(item.fspath):
        return
    match = _CRITERION_PATTERN.match(item.name)
    if not match:
        return
    number = int(match.group(1))
    entry = _criterion_outcomes.setdefault(
        number,
        {"passed": True, "label": (item.function.__doc__ or "").strip().splitlines()[0]
         if item.function.__doc__ else item.name},
    )
    if report.outcome != "passed":
        entry["passed"] = False


def pytest_terminal_summary(terminalreporter):
    if not _criterion_outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criterion_outcomes):
        entry = _criterion_outcomes[number]
        word = "PASS" if entry["passed"] else "FAIL"
        terminalreporter.write_line(f"CRITERION {number:>2}: {word}  {entry['label']}")
