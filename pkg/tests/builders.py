"""Small hand-made scenarios over zero-parameter actions and atoms."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from plan2bt.pddl import (
    Condition,
    Domain,
    DurativeActionSchema,
    Effect,
    GroundedPredicate,
    Phase,
    PlanStep,
    PredicateSchema,
    Problem,
    Template,
)
from plan2bt.sim import Scenario


def fact(name: str) -> GroundedPredicate:
    return GroundedPredicate(name, ())


def scenario(
    steps: Sequence[tuple],
    init: Iterable[str] = (),
    extra_conditions: dict[int, list[Condition]] | None = None,
    extra_effects: dict[int, list[Effect]] | None = None,
) -> Scenario:
    """``steps`` rows are ``(t, duration, requires, produces)``; action i is ``s<i>``.

    Requirements become ``at start`` conditions and products ``at end`` add
    effects. Extra conditions/effects are keyed by the 0-based row index.
    """
    extra_conditions = extra_conditions or {}
    extra_effects = extra_effects or {}
    atoms = set(init)
    for _, _, req, prod in steps:
        atoms |= set(req) | set(prod)
    for items in list(extra_conditions.values()) + list(extra_effects.values()):
        atoms |= {x.atom.name for x in items}
    actions, plan = [], []
    for i, (t, dur, req, prod) in enumerate(steps):
        name = f"s{i}"
        conds = tuple(Condition(Phase.AT_START, Template(r, ())) for r in req) + tuple(extra_conditions.get(i, ()))
        effs = tuple(Effect(Phase.AT_END, Template(p, ())) for p in prod) + tuple(extra_effects.get(i, ()))
        actions.append(DurativeActionSchema(name, (), Fraction(dur), conds, effs))
        plan.append(PlanStep(Fraction(t), name, (), Fraction(dur), i + 1))
    domain = Domain("hand", (), tuple(PredicateSchema(a, ()) for a in sorted(atoms)), tuple(actions))
    problem = Problem("hand", "hand", {}, frozenset(fact(x) for x in init), frozenset())
    plan.sort(key=lambda s: s.t)
    return Scenario(domain, problem, plan)


def diamond(db: int = 1, dc: int = 1) -> Scenario:
    """a -> {b, c} -> d."""
    return scenario(
        [
            (0, 1, [], ["x", "y"]),
            (1, db, ["x"], ["u"]),
            (1, dc, ["y"], ["v"]),
            (2, 1, ["u", "v"], ["done"]),
        ]
    )


def three_flows() -> Scenario:
    """Three independent starts with a cross-flow join, in the style of a
    multi-robot plan: flows A->B, C->D, E->F and K needs B, D and F."""
    return scenario(
        [
            (0, 2, [], ["a"]),  # 1
            (0, 2, [], ["c"]),  # 2
            (0, 2, [], ["e"]),  # 3
            (2, 3, ["a"], ["b"]),  # 4
            (2, 1, ["c"], ["d"]),  # 5
            (2, 2, ["e"], ["f"]),  # 6
            (5, 1, ["b", "d", "f"], ["k"]),  # 7
        ]
    )
