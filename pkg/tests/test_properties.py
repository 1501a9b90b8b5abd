from __future__ import annotations

from fractions import Fraction

from builders import scenario
from hypothesis import given, settings
from hypothesis import strategies as st

from plan2bt.sim import run_bt_model, run_planner_model, run_sequential_model


@st.composite
def feasible_plans(draw):
    """Random plans whose timestamps leave every producer time to finish."""
    n = draw(st.integers(1, 7))
    rows, ends = [], []
    for i in range(n):
        needs = draw(st.lists(st.integers(0, i - 1), unique=True, max_size=3)) if i else []
        dur = draw(st.integers(1, 6))
        earliest = max((ends[j] for j in needs), default=0)
        t = earliest + draw(st.integers(0, 3))
        rows.append((t, dur, [f"p{j}" for j in needs], [f"p{i}"]))
        ends.append(t + dur)
    order = sorted(range(n), key=lambda i: rows[i][0])
    scn = scenario([rows[i] for i in order])
    shares = draw(st.lists(st.integers(1, 1000), min_size=n, max_size=n))
    durations = {k: Fraction(rows[i][1] * shares[k - 1], 1000) for k, i in enumerate(order, start=1)}
    return scn, durations


@settings(max_examples=150, deadline=None)
@given(feasible_plans())
def test_bt_never_slower_than_planner(case):
    scn, durations = case
    bt = run_bt_model(scn.domain, scn.problem, scn.plan, durations)
    planner = run_planner_model(scn.plan, durations)
    sequential = run_sequential_model(scn.plan, durations)
    # the tree starts each action no later than its timestamp, given roots start at 0
    first = min(s.t for s in scn.plan)
    assert bt.makespan <= planner.makespan + first
    assert sequential.makespan == sum(durations.values())
    for uid, start in bt.start_times().items():
        assert start <= scn.plan[uid - 1].t


@settings(max_examples=50, deadline=None)
@given(feasible_plans())
def test_runs_are_reproducible(case):
    scn, durations = case
    a = run_bt_model(scn.domain, scn.problem, scn.plan, durations)
    b = run_bt_model(scn.domain, scn.problem, scn.plan, durations)
    assert a.to_csv() == b.to_csv()
