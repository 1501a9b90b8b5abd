"""Behavior-tree model and the compiler from planning graphs.

The compiler walks each execution flow (a unit with no remaining
requirements) along causal arcs. Every visit of a unit emits
``Sequence(Wait(p)..., Action(a), <successors>)`` where the waits cover the
graph predecessors of ``a`` that are not on the current path. Units reached
from several flows appear several times, but all occurrences share one
:class:`ActionInstance`, so each action runs once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Union

from .errors import TreeBuildError
from .graph import ActionUnit, PlanGraph, roots
from .pddl import GroundedPredicate, Phase


@dataclass(frozen=True)
class Sequence:
    children: tuple["BTNode", ...]

    def __post_init__(self):
        if not self.children:
            raise TreeBuildError("Sequence needs at least one child")


@dataclass(frozen=True)
class Parallel:
    children: tuple["BTNode", ...]

    def __post_init__(self):
        if not self.children:
            raise TreeBuildError("Parallel needs at least one child")


@dataclass(frozen=True)
class Condition:
    predicates: frozenset[GroundedPredicate]
    positive: bool = True


@dataclass(frozen=True)
class WaitFor:
    unit: int


@dataclass(frozen=True)
class ActionRef:
    unit: int


@dataclass(frozen=True)
class ApplyEffects:
    unit: int
    phase: Phase


@dataclass(frozen=True)
class ExecuteLeaf:
    unit: int


BTNode = Union[Sequence, Parallel, Condition, WaitFor, ActionRef, ApplyEffects, ExecuteLeaf]


class InstanceStatus(Enum):
    IDLE = "idle"
    RUNNING = "running"
    SUCCEEDED = "succeeded"
    FAILED = "failed"


_ALLOWED = {
    InstanceStatus.IDLE: {InstanceStatus.RUNNING},
    InstanceStatus.RUNNING: {InstanceStatus.SUCCEEDED, InstanceStatus.FAILED},
    InstanceStatus.SUCCEEDED: set(),
    InstanceStatus.FAILED: set(),
}


@dataclass(eq=False)
class ActionInstance:
    """The single shared execution state of one action unit."""

    unit: ActionUnit
    status: InstanceStatus = InstanceStatus.IDLE
    start_time: Fraction | None = None
    end_time: Fraction | None = None

    def transition(self, new: InstanceStatus) -> None:
        if new not in _ALLOWED[self.status]:
            raise TreeBuildError(f"illegal transition {self.status.value} -> {new.value} for a{self.unit.id}")
        self.status = new

    @property
    def done(self) -> bool:
        return self.status in (InstanceStatus.SUCCEEDED, InstanceStatus.FAILED)


@dataclass(eq=False)
class BehaviorTree:
    root: BTNode | None
    registry: dict[int, ActionInstance] = field(default_factory=dict)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BehaviorTree):
            return NotImplemented
        return self.root == other.root and {k: v.unit for k, v in self.registry.items()} == {
            k: v.unit for k, v in other.registry.items()
        }

    @classmethod
    def from_root(cls, root: BTNode | None, units: dict[int, ActionUnit]) -> "BehaviorTree":
        """Wrap a hand-built tree, creating one instance per referenced unit."""
        ids = sorted(instance_ids(root)) if root is not None else []
        return cls(root, {uid: ActionInstance(units[uid]) for uid in ids})


def iter_nodes(node: BTNode):
    yield node
    if isinstance(node, (Sequence, Parallel)):
        for child in node.children:
            yield from iter_nodes(child)


def action_ids(node: BTNode) -> set[int]:
    return {n.unit for n in iter_nodes(node) if isinstance(n, ActionRef)}


def instance_ids(node: BTNode) -> set[int]:
    """Units that need an :class:`ActionInstance` to execute ``node``."""
    return {n.unit for n in iter_nodes(node) if isinstance(n, (ActionRef, ApplyEffects, ExecuteLeaf))}


class _Adjacency:
    def __init__(self, graph: PlanGraph):
        order = {u.id: (u.t, u.line, u.id) for u in graph.units}
        preds: dict[int, set[int]] = {u.id: set() for u in graph.units}
        succs: dict[int, set[int]] = {u.id: set() for u in graph.units}
        for arc in graph.arcs:
            preds[arc.consumer].add(arc.producer)
            succs[arc.producer].add(arc.consumer)
        self.preds = {k: sorted(v, key=order.__getitem__) for k, v in preds.items()}
        self.succs = {k: sorted(v, key=order.__getitem__) for k, v in succs.items()}


def _get_tree(adj: _Adjacency, a: int, on_path: frozenset[int]) -> BTNode:
    if a in on_path:
        raise TreeBuildError(f"a{a} revisited on its own path; the graph is not acyclic")
    on_path = on_path | {a}
    waits = tuple(WaitFor(p) for p in adj.preds[a] if p not in on_path)
    succ = adj.succs[a]
    if not succ:
        return Sequence(waits + (ActionRef(a),)) if waits else ActionRef(a)
    if len(succ) == 1:
        return Sequence(waits + (ActionRef(a), _get_tree(adj, succ[0], on_path)))
    return Sequence(waits + (ActionRef(a), Parallel(tuple(_get_tree(adj, s, on_path) for s in succ))))


def get_tree(graph: PlanGraph, a: int, visited: frozenset[int] = frozenset()) -> BTNode:
    """Subtree for unit ``a`` given the units already on the current path."""
    graph.unit(a)
    return _get_tree(_Adjacency(graph), a, frozenset(visited))


def build_tree(graph: PlanGraph) -> BehaviorTree:
    """Compile a verified planning graph into a behavior tree.

    An empty graph gives a tree with no root, which succeeds immediately.
    """
    if not graph.units:
        return BehaviorTree(None, {})
    flows = roots(graph)
    if not flows:
        raise TreeBuildError("graph has units but none without requirements")
    adj = _Adjacency(graph)
    if len(flows) > 1:
        root: BTNode = Parallel(tuple(_get_tree(adj, f.id, frozenset()) for f in flows))
    else:
        root = _get_tree(adj, flows[0].id, frozenset())
    return BehaviorTree(root, {uid: ActionInstance(graph.unit(uid)) for uid in sorted(action_ids(root))})


def expand_action(unit: ActionUnit) -> BTNode:
    """Runtime subtree executed for one action unit.

    at-start checks (including ``over all`` conditions), at-start effects,
    the execution leaf, at-end checks and at-end effects, in that order.
    Condition nodes are omitted when there is nothing to check.
    """
    act = unit.action
    children: list[BTNode] = []
    if act.req_at_start | act.req_over_all:
        children.append(Condition(act.req_at_start | act.req_over_all, True))
    if act.neg_at_start | act.neg_over_all:
        children.append(Condition(act.neg_at_start | act.neg_over_all, False))
    children.append(ApplyEffects(unit.id, Phase.AT_START))
    children.append(ExecuteLeaf(unit.id))
    if act.req_at_end:
        children.append(Condition(act.req_at_end, True))
    if act.neg_at_end:
        children.append(Condition(act.neg_at_end, False))
    children.append(ApplyEffects(unit.id, Phase.AT_END))
    return Sequence(tuple(children))


def describe(node: BTNode | None, indent: int = 0) -> str:
    """Indented text rendering, handy in test failure messages."""
    pad = "  " * indent
    if node is None:
        return pad + "<empty>"
    if isinstance(node, (Sequence, Parallel)):
        head = pad + type(node).__name__
        return "\n".join([head] + [describe(c, indent + 1) for c in node.children])
    if isinstance(node, Condition):
        body = " ".join(str(p) for p in sorted(node.predicates))
        return f"{pad}Condition({'' if node.positive else 'not '}{body})"
    if isinstance(node, ApplyEffects):
        return f"{pad}ApplyEffects(a{node.unit}, {node.phase.value})"
    return f"{pad}{type(node).__name__}(a{node.unit})"
