"""Reference implementations the package is checked against.

They work from plain data (tuples and dicts) and share no code with the
package beyond the value types.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

import networkx as nx


def producer_scan(
    steps: Sequence[tuple[Fraction, int, Iterable[Hashable], Iterable[Hashable]]],
) -> set[tuple[int, int, Hashable]]:
    """Arcs by exhaustive scan.

    ``steps`` holds ``(t, line, requirements, effects)`` already in unit-id
    order (ids are positions from 1). For each requirement of each step the
    producer is the earlier-starting step with that effect whose (t, line) is
    greatest.
    """
    arcs = set()
    rows = [(t, line, set(req), set(eff)) for t, line, req, eff in steps]
    for ci, (tc, _, reqs, _) in enumerate(rows, start=1):
        for r in reqs:
            best = None
            for pi, (tp, lp, _, effs) in enumerate(rows, start=1):
                if tp < tc and r in effs and (best is None or (tp, lp) > best[0]):
                    best = ((tp, lp), pi)
            if best is not None:
                arcs.add((best[1], ci, r))
    return arcs


def longest_path(durations: Mapping[int, Fraction], edges: Iterable[tuple[int, int]]) -> Fraction:
    """Weight of the heaviest node-weighted path in a DAG (critical path)."""
    g = nx.DiGraph()
    g.add_nodes_from(durations)
    g.add_edges_from(edges)
    finish: dict[int, Fraction] = {}
    for n in nx.topological_sort(g):
        start = max((finish[p] for p in g.predecessors(n)), default=Fraction(0))
        finish[n] = start + durations[n]
    return max(finish.values(), default=Fraction(0))


def unit_rows(graph) -> list[tuple[Fraction, int, frozenset, frozenset]]:
    """Scan input rebuilt from the grounded actions, not from pruned sets."""
    return [(u.t, u.line, u.action.requirements, u.action.positive_effects) for u in graph.units]
