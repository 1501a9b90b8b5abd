"""Execution models and the repeated-run experiment harness.

Three ways to execute the same plan with the same per-action durations:

* ``planner``: every action starts at its plan timestamp.
* ``sequential``: actions run back to back in plan order.
* ``bt``: the compiled behavior tree, where an action starts as soon as its
  causal predecessors have finished.

Stochastic durations are drawn from a normal distribution with mean 3/4 and
standard deviation 1/8 of the action's maximum duration, clamped to
``[0.001, max]`` and rounded to the millisecond so runs stay exact.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .engine import (
    EventKind,
    ExecutionTrace,
    SimulatedBackend,
    TickStatus,
    TraceEvent,
    initial_world,
    run_to_completion,
)
from .errors import EmptyTrace, ExecutionFailed
from .graph import PlanGraph, build_graph
from .pddl import Domain, PlanStep, Problem, parse_domain, parse_plan, parse_problem
from .tree import ActionInstance, BehaviorTree, build_tree

EPSILON = Fraction(1, 1000)
MEAN_FACTOR = Fraction(3, 4)
SD_FACTOR = Fraction(1, 8)
EXECUTORS = ("planner", "sequential", "bt")

_MASK64 = (1 << 64) - 1


def splitmix64(seed: int, index: int) -> int:
    """Sub-seed for iteration ``index``: one splitmix64 step from
    ``seed + (index + 1) * 0x9E3779B97F4A7C15`` (mod 2**64)."""
    z = (seed + (index + 1) * 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class DurationModel:
    stochastic: bool = True

    @classmethod
    def deterministic(cls) -> "DurationModel":
        return cls(stochastic=False)


def sample_duration(t_max: Fraction, rng: np.random.Generator) -> Fraction:
    t_max = Fraction(t_max)
    if t_max <= 0:
        raise ValueError("t_max must be positive")
    x = rng.normal(float(t_max * MEAN_FACTOR), float(t_max * SD_FACTOR))
    d = Fraction(round(x * 1000), 1000)
    return min(max(d, EPSILON), t_max)


def sample_durations(
    plan: Sequence[PlanStep], model: DurationModel, rng: np.random.Generator | None = None
) -> dict[int, Fraction]:
    """Durations keyed by unit id (1-based position in (t, line) order)."""
    ordered = _ordered(plan)
    if not model.stochastic:
        return {i: s.duration for i, s in enumerate(ordered, start=1)}
    if rng is None:
        raise ValueError("stochastic durations need a seeded generator")
    return {i: sample_duration(s.duration, rng) for i, s in enumerate(ordered, start=1)}


def _ordered(plan: Sequence[PlanStep]) -> list[PlanStep]:
    return sorted(plan, key=lambda s: (s.t, s.line))


def _resolve(plan: Sequence[PlanStep], durations: Mapping[int, Fraction] | None) -> list[tuple[int, PlanStep, Fraction]]:
    out = []
    for i, step in enumerate(_ordered(plan), start=1):
        d = step.duration if durations is None else Fraction(durations.get(i, step.duration))
        if d > step.duration:
            raise ValueError(f"duration {d} of a{i} exceeds its maximum {step.duration}")
        out.append((i, step, d))
    return out


def _trace_from_intervals(items: list[tuple[int, str, Fraction, Fraction]]) -> ExecutionTrace:
    events = []
    for uid, label, start, end in items:
        events.append(TraceEvent(start, uid, label, EventKind.START))
        events.append(TraceEvent(end, uid, label, EventKind.END))
    order = {EventKind.END: 0, EventKind.FAIL: 0, EventKind.START: 1}
    events.sort(key=lambda e: (e.time, order[e.kind], e.unit))
    return ExecutionTrace(events, TickStatus.SUCCESS)


def run_planner_model(plan: Sequence[PlanStep], durations: Mapping[int, Fraction] | None = None) -> ExecutionTrace:
    """Each action starts exactly at its plan timestamp."""
    return _trace_from_intervals([(i, s.label, s.t, s.t + d) for i, s, d in _resolve(plan, durations)])


def run_sequential_model(plan: Sequence[PlanStep], durations: Mapping[int, Fraction] | None = None) -> ExecutionTrace:
    """Actions run one after another in plan order."""
    items = []
    clock = Fraction(0)
    for i, s, d in _resolve(plan, durations):
        items.append((i, s.label, clock, clock + d))
        clock += d
    return _trace_from_intervals(items)


def fresh_tree(tree: BehaviorTree) -> BehaviorTree:
    """Same structure with new, idle action instances."""
    return BehaviorTree(tree.root, {k: ActionInstance(v.unit) for k, v in tree.registry.items()})


def run_bt_model(
    domain: Domain,
    problem: Problem,
    plan: Sequence[PlanStep],
    durations: Mapping[int, Fraction] | None = None,
    *,
    tree: BehaviorTree | None = None,
    tick_budget: int = 1_000_000,
) -> ExecutionTrace:
    """Compile the plan and execute the tree with the given durations.

    ``tree`` may be passed to reuse an already compiled structure; its
    instances are not touched.
    """
    if tree is None:
        tree = build_tree(build_graph(plan, domain, problem))
    _resolve(plan, durations)
    trace = run_to_completion(fresh_tree(tree), initial_world(problem.init), SimulatedBackend(durations), tick_budget)
    if trace.final_status is not TickStatus.SUCCESS:
        raise ExecutionFailed("behavior tree run failed: " + "; ".join(trace.diagnostics))
    return trace


def occupancy(trace: ExecutionTrace) -> dict[int, Fraction]:
    """Fraction of the run with exactly k actions executing, for k = 0..max."""
    intervals = trace.intervals()
    if not intervals:
        raise EmptyTrace("occupancy of an empty trace is undefined")
    begin = min(s for s, _ in intervals.values())
    finish = max(e for _, e in intervals.values())
    span = finish - begin
    if span <= 0:
        raise EmptyTrace("trace spans zero time")
    deltas: dict[Fraction, int] = {}
    for s, e in intervals.values():
        deltas[s] = deltas.get(s, 0) + 1
        deltas[e] = deltas.get(e, 0) - 1
    totals: dict[int, Fraction] = {}
    running = 0
    prev = begin
    for time in sorted(deltas):
        if time > prev:
            totals[running] = totals.get(running, Fraction(0)) + (time - prev)
        running += deltas[time]
        prev = time
    top = max(totals)
    return {k: totals.get(k, Fraction(0)) / span for k in range(top + 1)}


# --------------------------------------------------------------------------
# experiments


@dataclass(frozen=True)
class Scenario:
    domain: Domain
    problem: Problem
    plan: list[PlanStep]

    @classmethod
    def from_texts(cls, domain_text: str, problem_text: str, plan_text: str) -> "Scenario":
        domain = parse_domain(domain_text)
        return cls(domain, parse_problem(problem_text, domain), parse_plan(plan_text, domain))

    @classmethod
    def load(cls, domain_path, problem_path, plan_path) -> "Scenario":
        return cls.from_texts(*(Path(p).read_text(encoding="utf-8") for p in (domain_path, problem_path, plan_path)))

    def graph(self) -> PlanGraph:
        return build_graph(self.plan, self.domain, self.problem)


@dataclass(frozen=True)
class ExperimentConfig:
    domain: str | Path
    problem: str | Path
    plan: str | Path
    executor: str = "bt"
    iterations: int = 10
    seed: int = 0
    robots: str = ""
    deterministic: bool = False

    def __post_init__(self):
        if self.executor not in EXECUTORS:
            raise ValueError(f"executor must be one of {EXECUTORS}, got {self.executor!r}")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")


@dataclass
class RunReport:
    executor: str
    robots: str
    seeds: list[int] = field(default_factory=list)
    makespans: list[Fraction] = field(default_factory=list)
    occupancy: dict[int, Fraction] = field(default_factory=dict)

    @property
    def mean_makespan(self) -> Fraction:
        return sum(self.makespans, Fraction(0)) / len(self.makespans)

    def to_dict(self) -> dict:
        return {
            "executor": self.executor,
            "robots": self.robots,
            "iterations": [
                {"iteration": i, "seed": s, "makespan": _fmt3(m)}
                for i, (s, m) in enumerate(zip(self.seeds, self.makespans))
            ],
            "mean_makespan": _fmt3(self.mean_makespan),
            "occupancy": {str(k): _fmt6(v) for k, v in sorted(self.occupancy.items())},
        }


def _fmt3(x: Fraction) -> str:
    return f"{float(x):.3f}"


def _fmt6(x: Fraction) -> str:
    return f"{float(x):.6f}"


def iteration_durations(plan: Sequence[PlanStep], seed: int, iteration: int, deterministic: bool) -> tuple[int, dict[int, Fraction]]:
    """Sub-seed and durations for one iteration; shared by all executors."""
    sub = splitmix64(seed, iteration)
    if deterministic:
        return sub, sample_durations(plan, DurationModel.deterministic())
    return sub, sample_durations(plan, DurationModel(), np.random.default_rng(sub))


def run_experiment(config: ExperimentConfig, scenario: Scenario | None = None) -> RunReport:
    """Run ``config.iterations`` seeded iterations of one executor."""
    if scenario is None:
        scenario = Scenario.load(config.domain, config.problem, config.plan)
    tree = build_tree(scenario.graph()) if config.executor == "bt" else None
    report = RunReport(config.executor, config.robots)
    histograms = []
    for k in range(config.iterations):
        sub, durations = iteration_durations(scenario.plan, config.seed, k, config.deterministic)
        if config.executor == "planner":
            trace = run_planner_model(scenario.plan, durations)
        elif config.executor == "sequential":
            trace = run_sequential_model(scenario.plan, durations)
        else:
            trace = run_bt_model(scenario.domain, scenario.problem, scenario.plan, durations, tree=tree)
        report.seeds.append(sub)
        report.makespans.append(trace.makespan)
        histograms.append(occupancy(trace) if scenario.plan else {0: Fraction(1)})
    top = max(max(h) for h in histograms)
    report.occupancy = {
        k: sum((h.get(k, Fraction(0)) for h in histograms), Fraction(0)) / len(histograms) for k in range(top + 1)
    }
    return report


def run_comparison(config: ExperimentConfig, executors: Sequence[str] = EXECUTORS) -> list[RunReport]:
    """All executors over the same sampled durations (same seed, same plan)."""
    scenario = Scenario.load(config.domain, config.problem, config.plan)
    return [
        run_experiment(ExperimentConfig(**{**config.__dict__, "executor": ex}), scenario) for ex in executors
    ]


def makespan_csv(reports: Sequence[RunReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["executor", "robots", "iteration", "seed", "makespan"])
    for r in reports:
        for i, (s, m) in enumerate(zip(r.seeds, r.makespans)):
            writer.writerow([r.executor, r.robots, i, s, _fmt3(m)])
    return buf.getvalue()


def occupancy_csv(reports: Sequence[RunReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["executor", "robots", "k", "fraction"])
    for r in reports:
        for k, v in sorted(r.occupancy.items()):
            writer.writerow([r.executor, r.robots, k, _fmt6(v)])
    return buf.getvalue()


def report_json(reports: Sequence[RunReport]) -> str:
    return json.dumps({"reports": [r.to_dict() for r in reports]}, indent=2, sort_keys=True) + "\n"
