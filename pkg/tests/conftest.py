from __future__ import annotations

import pytest

from plan2bt.fixtures import scenario_texts
from plan2bt.sim import Scenario


def load(name: str) -> Scenario:
    return Scenario.from_texts(*scenario_texts(name))


@pytest.fixture(scope="session")
def simple() -> Scenario:
    return load("simple")


@pytest.fixture(scope="session")
def r3() -> Scenario:
    return load("restaurant_r3")


@pytest.fixture(scope="session")
def restaurants() -> dict[int, Scenario]:
    return {n: load(f"restaurant_r{n}") for n in (1, 2, 3)}


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        status, title, elapsed = RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {title}  ({elapsed:.2f} s)")
