"""Tick-driven execution of compiled behavior trees over simulated time.

Sequence and Parallel nodes keep memory of children that already succeeded.
Action leaves delegate to the shared :class:`~plan2bt.tree.ActionInstance`
of their unit, whose runtime subtree checks conditions, applies effects and
runs the action through an :class:`ActionBackend`. Between ticks the clock
jumps to the next completion reported by the backend, so start and end
times are exact rationals.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Protocol

from .errors import BackendError, DeadlockDetected
from .graph import ActionUnit
from .pddl import GroundedPredicate, Phase
from .tree import (
    ActionInstance,
    ActionRef,
    ApplyEffects,
    BehaviorTree,
    BTNode,
    Condition,
    ExecuteLeaf,
    InstanceStatus,
    Parallel,
    Sequence,
    WaitFor,
    expand_action,
)

log = logging.getLogger(__name__)


class TickStatus(Enum):
    SUCCESS = "SUCCESS"
    FAILURE = "FAILURE"
    RUNNING = "RUNNING"


@dataclass(frozen=True)
class WorldState:
    facts: frozenset[GroundedPredicate] = frozenset()
    clock: Fraction = Fraction(0)


def check(world: WorldState, predicates: Iterable[GroundedPredicate], positive: bool = True) -> bool:
    """True when every predicate is present (``positive``) or absent."""
    if positive:
        return all(p in world.facts for p in predicates)
    return not any(p in world.facts for p in predicates)


def apply(world: WorldState, add: Iterable[GroundedPredicate], delete: Iterable[GroundedPredicate]) -> WorldState:
    """Deletes first, then adds, so a fact both added and deleted survives."""
    facts = (world.facts - frozenset(delete)) | frozenset(add)
    if facts == world.facts:
        return world
    return replace(world, facts=facts)


class EventKind(Enum):
    START = "start"
    END = "end"
    FAIL = "fail"


@dataclass(frozen=True)
class TraceEvent:
    time: Fraction
    unit: int
    action: str
    kind: EventKind


@dataclass
class ExecutionTrace:
    events: list[TraceEvent] = field(default_factory=list)
    final_status: TickStatus = TickStatus.RUNNING
    diagnostics: list[str] = field(default_factory=list)
    ticks: int = 0

    def intervals(self) -> dict[int, tuple[Fraction, Fraction]]:
        """``unit -> (start, end)`` for every action that finished."""
        starts = {e.unit: e.time for e in self.events if e.kind is EventKind.START}
        return {e.unit: (starts[e.unit], e.time) for e in self.events if e.kind is EventKind.END}

    def start_times(self) -> dict[int, Fraction]:
        return {e.unit: e.time for e in self.events if e.kind is EventKind.START}

    def end_times(self) -> dict[int, Fraction]:
        return {e.unit: e.time for e in self.events if e.kind is EventKind.END}

    @property
    def makespan(self) -> Fraction:
        """Time from the first start to the last end (0 for an empty trace)."""
        if not self.events:
            return Fraction(0)
        return max(e.time for e in self.events) - min(e.time for e in self.events)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["time", "action_id", "action", "event"])
        for e in self.events:
            writer.writerow([f"{float(e.time):.3f}", f"a{e.unit}", e.action, e.kind.value])
        return buf.getvalue()

    def to_jsonl(self) -> str:
        return "".join(
            json.dumps(
                {"time": f"{float(e.time):.3f}", "action_id": f"a{e.unit}", "action": e.action, "event": e.kind.value}
            )
            + "\n"
            for e in self.events
        )


class ActionBackend(Protocol):
    """Executes action units on behalf of the engine.

    A backend whose ``poll`` result depends only on the clock may set a
    true ``time_driven`` attribute; the engine then skips repeat polls
    while neither the clock nor the world has changed.
    """

    def start(self, unit: ActionUnit, now: Fraction) -> None: ...

    def poll(self, unit: ActionUnit, now: Fraction) -> TickStatus: ...

    def next_event_time(self) -> Fraction | None:
        """Earliest pending completion time, or None if nothing is running."""
        ...


class SimulatedBackend:
    """Each action takes a fixed simulated duration and then succeeds.

    ``durations`` overrides the unit's own (maximum) duration.
    """

    time_driven = True

    def __init__(self, durations: Mapping[int, Fraction] | None = None):
        self.durations = dict(durations or {})
        self._due: dict[int, Fraction] = {}

    def start(self, unit: ActionUnit, now: Fraction) -> None:
        if unit.id in self._due:
            raise BackendError(f"a{unit.id} started twice")
        self._due[unit.id] = now + self.durations.get(unit.id, unit.duration)

    def poll(self, unit: ActionUnit, now: Fraction) -> TickStatus:
        due = self._due.get(unit.id)
        if due is None:
            raise BackendError(f"a{unit.id} polled before start")
        if now >= due:
            del self._due[unit.id]
            return TickStatus.SUCCESS
        return TickStatus.RUNNING

    def next_event_time(self) -> Fraction | None:
        return min(self._due.values(), default=None)


# --------------------------------------------------------------------------
# runtime nodes


class _Node:
    def tick(self, engine: "Engine") -> TickStatus:
        raise NotImplementedError


class _Sequence(_Node):
    def __init__(self, children: list[_Node]):
        self.children = children
        self.current = 0

    def tick(self, engine: "Engine") -> TickStatus:
        while self.current < len(self.children):
            status = self.children[self.current].tick(engine)
            if status is not TickStatus.SUCCESS:
                return status
            self.current += 1
        return TickStatus.SUCCESS


class _Parallel(_Node):
    def __init__(self, children: list[_Node]):
        self.children = children
        self.succeeded = [False] * len(children)

    def tick(self, engine: "Engine") -> TickStatus:
        for i, child in enumerate(self.children):
            if self.succeeded[i]:
                continue
            status = child.tick(engine)
            if status is TickStatus.FAILURE:
                return TickStatus.FAILURE
            if status is TickStatus.SUCCESS:
                self.succeeded[i] = True
        return TickStatus.SUCCESS if all(self.succeeded) else TickStatus.RUNNING


class _Condition(_Node):
    def __init__(self, node: Condition, unit: int | None = None):
        self.node = node
        self.unit = unit

    def tick(self, engine: "Engine") -> TickStatus:
        if check(engine.world, self.node.predicates, self.node.positive):
            return TickStatus.SUCCESS
        missing = sorted(
            p for p in self.node.predicates if (p in engine.world.facts) != self.node.positive
        )
        where = f" for a{self.unit}" if self.unit is not None else ""
        engine.diagnose(
            f"condition failed{where}: "
            + ", ".join(str(p) if self.node.positive else f"(not {p})" for p in missing)
        )
        return TickStatus.FAILURE


class _Wait(_Node):
    def __init__(self, unit: int):
        self.unit = unit

    def tick(self, engine: "Engine") -> TickStatus:
        inst = engine.tree.registry.get(self.unit)
        if inst is not None and inst.status is InstanceStatus.SUCCEEDED:
            return TickStatus.SUCCESS
        return TickStatus.RUNNING


class _ApplyEffects(_Node):
    def __init__(self, unit: ActionUnit, phase: Phase):
        act = unit.action
        if phase is Phase.AT_START:
            self.add, self.delete = act.eff_add_at_start, act.eff_del_at_start
        else:
            self.add, self.delete = act.eff_add_at_end, act.eff_del_at_end

    def tick(self, engine: "Engine") -> TickStatus:
        engine.set_world(apply(engine.world, self.add, self.delete))
        return TickStatus.SUCCESS


class _Execute(_Node):
    """Runs the action through the backend and enforces ``over all`` conditions."""

    def __init__(self, unit: ActionUnit):
        self.unit = unit
        self.started = False
        act = unit.action
        self.over_pos, self.over_neg = act.req_over_all, act.neg_over_all

    def tick(self, engine: "Engine") -> TickStatus:
        try:
            if not self.started:
                engine.backend.start(self.unit, engine.world.clock)
                self.started = True
                engine.mark_changed()
            status = engine.backend.poll(self.unit, engine.world.clock)
        except BackendError as exc:
            engine.diagnose(f"backend error for a{self.unit.id}: {exc}")
            return TickStatus.FAILURE
        if status is TickStatus.RUNNING:
            if not (check(engine.world, self.over_pos, True) and check(engine.world, self.over_neg, False)):
                engine.diagnose(f"over-all condition violated for a{self.unit.id}")
                return TickStatus.FAILURE
        return status


class _ActionRef(_Node):
    def __init__(self, instance: ActionInstance, body: _Node):
        self.instance = instance
        self.body = body
        # with a time-driven backend RUNNING is a pure function of (clock,
        # world), so a repeat tick in the same snapshot can be skipped
        self._snapshot: WorldState | None = None

    def tick(self, engine: "Engine") -> TickStatus:
        inst = self.instance
        if inst.status is InstanceStatus.SUCCEEDED:
            return TickStatus.SUCCESS
        if inst.status is InstanceStatus.FAILED:
            return TickStatus.FAILURE
        if self._snapshot is engine.world:
            return TickStatus.RUNNING
        now = engine.world.clock
        if inst.status is InstanceStatus.IDLE:
            inst.transition(InstanceStatus.RUNNING)
            inst.start_time = now
            engine.record(now, inst.unit, EventKind.START)
        status = self.body.tick(engine)
        if status is TickStatus.SUCCESS:
            inst.transition(InstanceStatus.SUCCEEDED)
            inst.end_time = now
            engine.record(now, inst.unit, EventKind.END)
        elif status is TickStatus.FAILURE:
            inst.transition(InstanceStatus.FAILED)
            inst.end_time = now
            engine.record(now, inst.unit, EventKind.FAIL)
        elif engine.cache_running:
            self._snapshot = engine.world
        return status


class Engine:
    """Owns one tree, its world state and a backend; not thread-safe."""

    def __init__(self, tree: BehaviorTree, world: WorldState, backend: ActionBackend):
        self.tree = tree
        self.world = world
        self.backend = backend
        self.trace = ExecutionTrace()
        self._changed = False
        self._refs: dict[int, _ActionRef] = {}
        self.cache_running = bool(getattr(backend, "time_driven", False))
        self._root = self._compile(tree.root) if tree.root is not None else None

    def _compile(self, node: BTNode, unit: int | None = None) -> _Node:
        if isinstance(node, Sequence):
            return _Sequence([self._compile(c, unit) for c in node.children])
        if isinstance(node, Parallel):
            return _Parallel([self._compile(c, unit) for c in node.children])
        if isinstance(node, Condition):
            return _Condition(node, unit)
        if isinstance(node, WaitFor):
            return _Wait(node.unit)
        if isinstance(node, ActionRef):
            # every occurrence shares one runtime body, mirroring the registry
            ref = self._refs.get(node.unit)
            if ref is None:
                inst = self.tree.registry[node.unit]
                ref = _ActionRef(inst, self._compile(expand_action(inst.unit), node.unit))
                self._refs[node.unit] = ref
            return ref
        if isinstance(node, ApplyEffects):
            return _ApplyEffects(self.tree.registry[node.unit].unit, node.phase)
        if isinstance(node, ExecuteLeaf):
            return _Execute(self.tree.registry[node.unit].unit)
        raise TypeError(f"not a behavior-tree node: {node!r}")

    # hooks used by runtime nodes
    def set_world(self, world: WorldState) -> None:
        if world is not self.world:
            self.world = world
            self._changed = True

    def mark_changed(self) -> None:
        self._changed = True

    def record(self, time: Fraction, unit: ActionUnit, kind: EventKind) -> None:
        self.trace.events.append(TraceEvent(time, unit.id, unit.label, kind))
        self._changed = True
        log.debug("t=%s a%d %s %s", time, unit.id, unit.label, kind.value)

    def diagnose(self, message: str) -> None:
        self.trace.diagnostics.append(f"t={float(self.world.clock):.3f}: {message}")
        log.info(message)

    def tick(self) -> TickStatus:
        """Propagate one tick from the root at the current clock."""
        self.trace.ticks += 1
        if self._root is None:
            status = TickStatus.SUCCESS
        else:
            status = self._root.tick(self)
            if status is not TickStatus.FAILURE and any(
                i.status is InstanceStatus.FAILED for i in self.tree.registry.values()
            ):
                status = TickStatus.FAILURE
        self.trace.final_status = status
        return status

    def run(self, tick_budget: int = 1_000_000) -> ExecutionTrace:
        if tick_budget <= 0:
            raise ValueError("tick_budget must be positive")
        for _ in range(tick_budget):
            self._changed = False
            status = self.tick()
            if status is not TickStatus.RUNNING:
                return self.trace
            if self._changed:
                continue
            due = self.backend.next_event_time()
            if due is None:
                raise DeadlockDetected(
                    f"no progress possible at t={self.world.clock}; "
                    f"waiting units: {self._blocked()}"
                )
            if due > self.world.clock:
                self.world = replace(self.world, clock=due)
        raise DeadlockDetected(f"tick budget of {tick_budget} exhausted at t={self.world.clock}")

    def _blocked(self) -> list[str]:
        return [f"a{k}" for k, v in sorted(self.tree.registry.items()) if v.status is not InstanceStatus.SUCCEEDED]


def tick(engine: Engine) -> TickStatus:
    return engine.tick()


def run_to_completion(
    tree: BehaviorTree,
    world: WorldState,
    backend: ActionBackend | None = None,
    tick_budget: int = 1_000_000,
) -> ExecutionTrace:
    """Tick the tree until SUCCESS or FAILURE, advancing simulated time."""
    engine = Engine(tree, world, backend if backend is not None else SimulatedBackend())
    return engine.run(tick_budget)


def initial_world(init: Iterable[GroundedPredicate]) -> WorldState:
    return WorldState(frozenset(init), Fraction(0))
