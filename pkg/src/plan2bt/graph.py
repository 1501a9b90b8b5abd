"""Planning graph: action units linked by causal arcs.

Each plan step becomes an :class:`ActionUnit`. A requirement of unit ``c`` is
linked to the unit with the latest start time strictly before ``c`` whose
positive effects contain it (ties broken by latest plan line). Initial facts
that no action ever produces are pruned from the requirements, and so are
requirements that hold initially and have no earlier producer. Whatever
remains must be covered by an arc.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import UnknownUnit, UnsupportedRequirement
from .pddl import Domain, GroundedAction, GroundedPredicate, PlanStep, Problem, ground_action


@dataclass(frozen=True)
class ActionUnit:
    id: int
    t: Fraction
    action: GroundedAction
    requirements: frozenset[GroundedPredicate]
    effects: frozenset[GroundedPredicate]
    line: int = 0

    @property
    def duration(self) -> Fraction:
        return self.action.duration

    @property
    def label(self) -> str:
        return self.action.label

    @property
    def node_id(self) -> str:
        return f"a{self.id}"


@dataclass(frozen=True, order=True)
class CausalArc:
    producer: int
    consumer: int
    predicate: GroundedPredicate


@dataclass(frozen=True)
class PlanGraph:
    units: tuple[ActionUnit, ...]
    arcs: frozenset[CausalArc]
    initial_only: frozenset[GroundedPredicate] = frozenset()
    # requirements dropped because they hold in the initial state and no
    # earlier unit produces them: (unit id, predicate)
    initially_supported: frozenset[tuple[int, GroundedPredicate]] = frozenset()

    def unit(self, uid: int) -> ActionUnit:
        if not 1 <= uid <= len(self.units) or self.units[uid - 1].id != uid:
            for u in self.units:
                if u.id == uid:
                    return u
            raise UnknownUnit(f"no action unit a{uid}")
        return self.units[uid - 1]

    def predecessors(self, uid: int) -> list[int]:
        self.unit(uid)
        return sorted({a.producer for a in self.arcs if a.consumer == uid})

    def successors(self, uid: int) -> list[int]:
        self.unit(uid)
        return sorted({a.consumer for a in self.arcs if a.producer == uid})

    def sorted_arcs(self) -> list[CausalArc]:
        return sorted(self.arcs)


def build_action_units(
    plan: Sequence[PlanStep], domain: Domain, problem: Problem | None = None
) -> list[ActionUnit]:
    """One unit per plan step, numbered from 1 in (t, line) order.

    ``requirements`` holds every positive condition, ``effects`` every
    positive effect. Delete effects stay on ``unit.action`` for runtime use.
    """
    ordered = sorted(plan, key=lambda s: (s.t, s.line))
    units = []
    for index, step in enumerate(ordered, start=1):
        action = ground_action(
            domain.action(step.action_name), step.args, step.duration, domain=domain, problem=problem
        )
        units.append(
            ActionUnit(index, step.t, action, action.requirements, action.positive_effects, step.line)
        )
    return units


def link_graph(units: Sequence[ActionUnit], problem: Problem) -> PlanGraph:
    """Link requirements to producers, prune initial facts and verify coverage."""
    units = sorted(units, key=lambda u: (u.t, u.line, u.id))
    produced = set().union(*(u.effects for u in units)) if units else set()
    initial_only = frozenset(problem.init - produced)

    arcs: set[CausalArc] = set()
    supported: set[tuple[int, GroundedPredicate]] = set()
    pruned_units = []
    for i, consumer in enumerate(units):
        remaining = set()
        for req in sorted(consumer.requirements):
            if req in initial_only:
                continue
            producer = None
            for cand in reversed(units[:i]):
                if cand.t < consumer.t and req in cand.effects:
                    producer = cand
                    break
            if producer is not None:
                arcs.add(CausalArc(producer.id, consumer.id, req))
                remaining.add(req)
            elif req in problem.init:
                supported.add((consumer.id, req))
            else:
                raise UnsupportedRequirement(
                    f"requirement {req} of a{consumer.id} {consumer.label} at t={consumer.t} "
                    "has no earlier producer and does not hold initially",
                    consumer.id,
                    req,
                )
        pruned_units.append(
            ActionUnit(consumer.id, consumer.t, consumer.action, frozenset(remaining), consumer.effects, consumer.line)
        )
    return PlanGraph(tuple(pruned_units), frozenset(arcs), initial_only, frozenset(supported))


def build_graph(plan: Sequence[PlanStep], domain: Domain, problem: Problem) -> PlanGraph:
    return link_graph(build_action_units(plan, domain, problem), problem)


def in_cardinality(graph: PlanGraph, uid: int) -> int:
    """Number of distinct units with an arc into ``uid``."""
    return len(graph.predecessors(uid))


def out_cardinality(graph: PlanGraph, uid: int) -> int:
    """Number of distinct units ``uid`` has an arc to."""
    return len(graph.successors(uid))


def roots(graph: PlanGraph) -> list[ActionUnit]:
    return [u for u in graph.units if not u.requirements]


def format_time(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{float(value):g}"


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(graph: PlanGraph, name: str = "plan") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;", "  node [shape=box];"]
    for u in graph.units:
        lines.append(f"  {u.node_id} [label={_dot_quote(f'{format_time(u.t)}: {u.label}')}];")
    for arc in graph.sorted_arcs():
        lines.append(f"  a{arc.producer} -> a{arc.consumer} [label={_dot_quote(arc.predicate.label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def topological_order(graph: PlanGraph) -> list[int]:
    """Unit ids in an order compatible with every arc (plan order already is)."""
    return [u.id for u in sorted(graph.units, key=lambda u: (u.t, u.line, u.id))]

