"""Bundled PDDL fixtures.

``simple_*`` is a two-room navigation example and ``restaurant_r3.plan`` a
three-robot waiter plan. ``restaurant_domain.pddl``, the
``restaurant_r<n>.pddl`` problems and the one- and two-robot plans were
written to be consistent with that three-robot plan.
"""

from __future__ import annotations

from importlib import resources


def fixture_path(name: str):
    return resources.files(__name__).joinpath(name)


def read_fixture(name: str) -> str:
    return fixture_path(name).read_text(encoding="utf-8")


SCENARIOS = {
    "simple": ("simple_domain.pddl", "simple_problem.pddl", "simple.plan"),
    "restaurant_r1": ("restaurant_domain.pddl", "restaurant_r1.pddl", "restaurant_r1.plan"),
    "restaurant_r2": ("restaurant_domain.pddl", "restaurant_r2.pddl", "restaurant_r2.plan"),
    "restaurant_r3": ("restaurant_domain.pddl", "restaurant_r3.pddl", "restaurant_r3.plan"),
}


def scenario_texts(name: str) -> tuple[str, str, str]:
    """Return (domain, problem, plan) texts for a bundled scenario."""
    return tuple(read_fixture(f) for f in SCENARIOS[name])  # type: ignore[return-value]
