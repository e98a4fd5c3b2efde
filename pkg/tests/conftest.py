from __future__ import annotations

import pytest

from attune.simulator import default_task
from attune.telemetry import Arena, Goal, TaskConfig

from helpers import write_cohort


@pytest.fixture
def task():
    return default_task()


@pytest.fixture
def two_goal_task():
    return TaskConfig(
        arena=Arena(-50, -50, 50, 50),
        goals=(Goal("east", 10.0, 0.0), Goal("west", -10.0, 0.0)),
    )


@pytest.fixture(scope="session")
def fixture_dir(tmp_path_factory):
    """Read-only directory holding the six fixture trials."""
    d = tmp_path_factory.mktemp("fixtures")
    write_cohort(d)
    return d


# -- acceptance summary --------------------------------------------------------------

_criteria: dict[int, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    n = getattr(report, "criterion", None)
    if n is not None:
        _criteria.setdefault(n, []).append(report.outcome)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = marker.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        outcomes = _criteria[n]
        verdict = "PASS" if all(o == "passed" for o in outcomes) else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {verdict} ({len(outcomes)} checks)")

