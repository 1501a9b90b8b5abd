"""Compile temporal PDDL plans into behavior trees and simulate their execution."""

from __future__ import annotations

from .engine import ExecutionTrace, TickStatus, WorldState, initial_world, run_to_completion
from .errors import Plan2BTError
from .graph import ActionUnit, CausalArc, PlanGraph, build_graph, roots, to_dot
from .pddl import GroundedPredicate, parse_domain, parse_plan, parse_problem
from .sim import (
    ExperimentConfig,
    RunReport,
    Scenario,
    occupancy,
    run_bt_model,
    run_experiment,
    run_planner_model,
    run_sequential_model,
)
from .tree import BehaviorTree, build_tree
from .xmlio import from_xml, to_xml

__version__ = "0.1.0"

__all__ = [
    "ActionUnit",
    "BehaviorTree",
    "CausalArc",
    "ExecutionTrace",
    "ExperimentConfig",
    "GroundedPredicate",
    "Plan2BTError",
    "PlanGraph",
    "RunReport",
    "Scenario",
    "TickStatus",
    "WorldState",
    "build_graph",
    "build_tree",
    "from_xml",
    "initial_world",
    "occupancy",
    "parse_domain",
    "parse_plan",
    "parse_problem",
    "roots",
    "run_bt_model",
    "run_experiment",
    "run_planner_model",
    "run_sequential_model",
    "run_to_completion",
    "to_dot",
    "to_xml",
]
