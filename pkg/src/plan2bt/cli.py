"""Command-line driver: ``plan2bt {graph,compile,run,report,validate}``.

Exit codes: 0 success, 1 unreadable or invalid input (parse, typing,
unknown names), 2 planning-graph verification or tree build failure,
3 deadlock while executing, 4 behavior-tree run ended in FAILURE,
64 command-line usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import fixtures
from .errors import (
    DeadlockDetected,
    ExecutionFailed,
    Plan2BTError,
    TreeBuildError,
    UnsupportedRequirement,
)
from .graph import to_dot
from .sim import (
    EXECUTORS,
    ExperimentConfig,
    Scenario,
    makespan_csv,
    occupancy_csv,
    report_json,
    run_experiment,
)
from .tree import build_tree, iter_nodes
from .xmlio import to_xml

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_GRAPH = 2
EXIT_DEADLOCK = 3
EXIT_FAILED = 4
EXIT_USAGE = 64

log = logging.getLogger("plan2bt")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_inputs(p: argparse.ArgumentParser) -> None:
    p.add_argument("--domain", help="domain .pddl file")
    p.add_argument("--problem", help="problem .pddl file")
    p.add_argument("--plan", help="plan file")
    p.add_argument(
        "--scenario",
        choices=sorted(fixtures.SCENARIOS),
        help="use a bundled fixture instead of --domain/--problem/--plan",
    )


def _paths(args) -> tuple[str, str, str]:
    if args.scenario:
        return tuple(str(fixtures.fixture_path(f)) for f in fixtures.SCENARIOS[args.scenario])  # type: ignore
    missing = [f"--{n}" for n in ("domain", "problem", "plan") if getattr(args, n) is None]
    if missing:
        raise _UsageError(f"missing {', '.join(missing)} (or use --scenario)")
    return args.domain, args.problem, args.plan


class _UsageError(Exception):
    pass


class _InputError(Exception):
    pass


def _load(args) -> Scenario:
    paths = _paths(args)
    texts = []
    for path in paths:
        try:
            texts.append(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise _InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    return Scenario.from_texts(*texts)


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _plural(n: int, word: str) -> str:
    return f"{n} {word}{'' if n == 1 else 's'}"


def cmd_graph(args) -> int:
    graph = _load(args).graph()
    if args.out_dot:
        _write(args.out_dot, to_dot(graph))
    print(f"{_plural(len(graph.units), 'unit')}, {_plural(len(graph.arcs), 'arc')}")
    return EXIT_OK


def cmd_compile(args) -> int:
    tree = build_tree(_load(args).graph())
    _write(args.out_xml, to_xml(tree))
    nodes = sum(1 for _ in iter_nodes(tree.root)) if tree.root is not None else 0
    summary = f"{_plural(nodes, 'node')}, {_plural(len(tree.registry), 'action')}"
    print(summary, file=sys.stderr if args.out_xml in (None, "-") else sys.stdout)
    return EXIT_OK


def cmd_run(args) -> int:
    if args.seed is None and not args.deterministic:
        raise _UsageError("run needs --seed (or --deterministic)")
    if args.iterations < 1:
        raise _UsageError("--iterations must be >= 1")
    scenario = _load(args)
    domain, problem, plan = _paths(args)
    executors = EXECUTORS if args.executor == "all" else (args.executor,)
    reports = []
    for ex in executors:
        config = ExperimentConfig(
            domain, problem, plan, ex, args.iterations, args.seed or 0, args.robots, args.deterministic
        )
        reports.append(run_experiment(config, scenario))
    for r in reports:
        print(f"{r.executor}: mean makespan {float(r.mean_makespan):.3f}")
    if args.csv:
        _write(args.csv, makespan_csv(reports))
        occ = args.occupancy_csv or str(Path(args.csv).with_name(Path(args.csv).stem + "_occupancy.csv"))
        _write(occ, occupancy_csv(reports))
    elif args.occupancy_csv:
        _write(args.occupancy_csv, occupancy_csv(reports))
    if args.json:
        _write(args.json, report_json(reports))
    return EXIT_OK


def cmd_report(args) -> int:
    try:
        data = json.loads(Path(args.json).read_text(encoding="utf-8"))
        reports = data["reports"]
    except (OSError, ValueError, KeyError) as exc:
        raise _InputError(f"cannot read report {args.json}: {exc}") from None
    ks = sorted({int(k) for r in reports for k in r["occupancy"]})
    header = ["executor", "robots", "runs", "mean"] + [("idle" if k == 0 else f"k={k}") for k in ks]
    print("  ".join(f"{h:>10}" for h in header))
    for r in reports:
        occ = [f"{100 * float(r['occupancy'].get(str(k), 0)):9.2f}%" for k in ks]
        row = [r["executor"], r["robots"] or "-", str(len(r["iterations"])), r["mean_makespan"]] + occ
        print("  ".join(f"{c:>10}" for c in row))
    return EXIT_OK


def cmd_validate(args) -> int:
    scenario = _load(args)
    graph = scenario.graph()
    tree = build_tree(graph)
    print(f"ok: {_plural(len(graph.units), 'unit')}, {_plural(len(graph.arcs), 'arc')}, {_plural(len(tree.registry), 'action')} in tree")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="plan2bt", description="Compile temporal PDDL plans into behavior trees and simulate them.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("graph", help="build the planning graph and write it as DOT")
    _add_inputs(p)
    p.add_argument("--out-dot", help="DOT output file")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("compile", help="compile the plan into a behavior tree (XML)")
    _add_inputs(p)
    p.add_argument("--out-xml", help="XML output file (default: standard output)")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("run", help="simulate the plan with one or all executors")
    _add_inputs(p)
    p.add_argument("--executor", choices=EXECUTORS + ("all",), default="all")
    p.add_argument("--iterations", type=int, default=10)
    p.add_argument("--seed", type=int)
    p.add_argument("--deterministic", action="store_true", help="use maximum durations instead of sampling")
    p.add_argument("--robots", default="", help="label written to the report")
    p.add_argument("--csv", help="makespan CSV output")
    p.add_argument("--occupancy-csv", help="occupancy CSV output (default: <csv stem>_occupancy.csv)")
    p.add_argument("--json", help="JSON report output")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("report", help="summarize a JSON report written by 'run --json'")
    p.add_argument("--json", required=True)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("validate", help="parse, verify the graph and build the tree")
    _add_inputs(p)
    p.set_defaults(func=cmd_validate)
    return parser


def _configure_logging() -> None:
    level = os.environ.get("PLAN2BT_LOG", "warn").lower()
    levels = {"error": logging.ERROR, "warn": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(level=levels.get(level, logging.WARNING), stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"plan2bt: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _InputError as exc:
        print(f"plan2bt: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (UnsupportedRequirement, TreeBuildError) as exc:
        print(f"plan2bt: graph verification failed: {exc}", file=sys.stderr)
        return EXIT_GRAPH
    except DeadlockDetected as exc:
        print(f"plan2bt: deadlock: {exc}", file=sys.stderr)
        return EXIT_DEADLOCK
    except ExecutionFailed as exc:
        print(f"plan2bt: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except Plan2BTError as exc:
        print(f"plan2bt: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
