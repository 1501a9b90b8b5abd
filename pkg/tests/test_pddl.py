from __future__ import annotations

from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plan2bt.errors import (
    ArityMismatch,
    DomainMismatch,
    InvalidDuration,
    ParseError,
    TypeMismatch,
    UnknownAction,
    UnknownObject,
    UnknownPredicate,
    UnsupportedFeature,
)
from plan2bt.fixtures import read_fixture
from plan2bt.pddl import (
    Condition,
    Domain,
    DurativeActionSchema,
    Effect,
    GroundedPredicate,
    Phase,
    PredicateSchema,
    Problem,
    Template,
    format_domain,
    format_plan,
    format_problem,
    ground_action,
    parse_domain,
    parse_plan,
    parse_problem,
)

G = GroundedPredicate
SIMPLE_DOMAIN = read_fixture("simple_domain.pddl")
SIMPLE_PROBLEM = read_fixture("simple_problem.pddl")


@pytest.fixture(scope="module")
def domain() -> Domain:
    return parse_domain(SIMPLE_DOMAIN)


def test_simple_domain(domain):
    assert domain.name == "simple"
    assert domain.types == ("robot", "room")
    assert [p.name for p in domain.predicates] == ["robot_at", "connected"]
    assert domain.predicate("connected").parameters == (("?ro1", "room"), ("?ro2", "room"))
    (move,) = domain.actions
    assert move.name == "move" and move.duration == 5
    assert move.parameters == (("?r", "robot"), ("?r1", "room"), ("?r2", "room"))
    assert len(move.conditions) == 2 and len(move.effects) == 2


def test_domain_without_actions():
    d = parse_domain("(define (domain empty) (:types a) (:predicates (p ?x - a)))")
    assert d.actions == ()


def test_extra_at_end_delete(domain):
    text = SIMPLE_DOMAIN.replace(
        "(at end(robot_at ?r ?r2))))", "(at end(robot_at ?r ?r2))\n    (at end(not(robot_at ?r ?r2)))))"
    )
    move = parse_domain(text).action("move")
    assert move.effects[-1] == Effect(Phase.AT_END, Template("robot_at", ("?r", "?r2")), False)
    assert len(move.effects) == len(domain.action("move").effects) + 1


def test_identifiers_are_lower_cased():
    d = parse_domain(SIMPLE_DOMAIN.replace("robot_at", "Robot_AT").replace("move", "MOVE"))
    assert d.action("move").conditions[1].atom.name == "robot_at"


@pytest.mark.parametrize(
    "section",
    [
        "(:action a :parameters () :precondition (and) :effect (and))",
        "(:functions (f))",
        "(:constants c - robot)",
    ],
)
def test_unsupported_sections(section):
    with pytest.raises(UnsupportedFeature):
        parse_domain(SIMPLE_DOMAIN.rstrip().rstrip(")") + section + ")")


@pytest.mark.parametrize(
    "cond",
    [
        "(at start (or (robot_at ?r ?r1) (connected ?r1 ?r2)))",
        "(at start (forall (?x - room) (connected ?x ?r2)))",
        "(at start (> (fuel ?r) 1))",
    ],
)
def test_unsupported_conditions(cond):
    text = SIMPLE_DOMAIN.replace("(at start(connected ?r1 ?r2))", cond)
    with pytest.raises(UnsupportedFeature):
        parse_domain(text)


def test_untimed_condition_is_rejected():
    with pytest.raises((ParseError, UnsupportedFeature)):
        parse_domain(SIMPLE_DOMAIN.replace("(at start(connected ?r1 ?r2))", "(connected ?r1 ?r2)"))


def test_condition_on_undeclared_variable():
    with pytest.raises(ParseError):
        parse_domain(SIMPLE_DOMAIN.replace("(at start(connected ?r1 ?r2))", "(at start(connected ?r1 ?zz))"))


def test_malformed_domain_has_position():
    with pytest.raises(ParseError) as info:
        parse_domain(SIMPLE_DOMAIN.rstrip()[:-1])
    assert info.value.line == 1


def test_simple_problem(domain):
    p = parse_problem(SIMPLE_PROBLEM, domain)
    assert len(p.objects) == 4 and p.objects["r2d2"] == "robot"
    assert len(p.init) == 5
    assert G("robot_at", ("r2d2", "bedroom")) in p.init
    assert p.goal == {G("robot_at", ("r2d2", "kitchen"))}


def test_empty_init(domain):
    text = SIMPLE_PROBLEM.split("(:init")[0] + "(:init)\n(:goal (and))\n)"
    assert parse_problem(text, domain).init == frozenset()


def test_problem_type_mismatch(domain):
    text = SIMPLE_PROBLEM.replace("(robot_at r2d2 bedroom)", "(robot_at kitchen r2d2)")
    with pytest.raises(TypeMismatch):
        parse_problem(text, domain)


@pytest.mark.parametrize(
    "old,new,error",
    [
        ("(robot_at r2d2 bedroom)", "(robot_on r2d2 bedroom)", UnknownPredicate),
        ("(robot_at r2d2 bedroom)", "(robot_at c3po bedroom)", UnknownObject),
        ("(robot_at r2d2 bedroom)", "(robot_at r2d2)", ArityMismatch),
        ("(:domain simple)", "(:domain other)", DomainMismatch),
    ],
)
def test_problem_errors(domain, old, new, error):
    with pytest.raises(error):
        parse_problem(SIMPLE_PROBLEM.replace(old, new), domain)


def test_simple_plan(domain):
    steps = parse_plan(read_fixture("simple.plan"), domain)
    assert [(s.t, s.action_name, s.args, s.duration) for s in steps] == [
        (0, "move", ("r2d2", "bedroom", "living"), 5),
        (5, "move", ("r2d2", "living", "kitchen"), 5),
    ]


def test_plan_duration_column():
    d = parse_domain(read_fixture("restaurant_domain.pddl"))
    steps = parse_plan(read_fixture("restaurant_r3.plan"), d)
    last = steps[-1]
    assert (last.t, last.action_name, last.args, last.duration) == (35, "collect_payment", ("robot1", "table_c"), 1)
    assert len(steps) == 26
    assert sum(s.duration for s in steps) == 82


def test_plan_variants(domain):
    text = "; comment\n2.5 (MOVE r2d2 living kitchen) [3]\n0.000: (move r2d2 bedroom living) 4.25\n\n"
    steps = parse_plan(text, domain)
    assert [(s.t, s.duration, s.line) for s in steps] == [(0, Fraction(17, 4), 3), (Fraction(5, 2), 3, 2)]


def test_plan_sort_is_stable(domain):
    text = "1 (move r2d2 living kitchen)\n0 (move r2d2 bedroom living)\n1 (move r2d2 kitchen living)\n"
    assert [s.line for s in parse_plan(text, domain)] == [2, 1, 3]


def test_empty_plan(domain):
    assert parse_plan("", domain) == []


@pytest.mark.parametrize(
    "text,error",
    [
        ("0: (fly r2d2 bedroom living)", UnknownAction),
        ("0: (move r2d2 bedroom)", ArityMismatch),
        ("0: move r2d2 bedroom living", ParseError),
        ("0: (move r2d2 bedroom living) 0", InvalidDuration),
    ],
)
def test_plan_errors(domain, text, error):
    with pytest.raises(error):
        parse_plan(text, domain)


def test_ground_move(domain):
    act = ground_action(domain.action("move"), ["r2d2", "bedroom", "living"])
    assert act.req_at_start == {G("connected", ("bedroom", "living")), G("robot_at", ("r2d2", "bedroom"))}
    assert act.eff_del_at_start == {G("robot_at", ("r2d2", "bedroom"))}
    assert act.eff_add_at_end == {G("robot_at", ("r2d2", "living"))}
    assert not (act.req_over_all | act.req_at_end | act.eff_add_at_start | act.eff_del_at_end)
    assert act.duration == 5


def test_ground_without_conditions():
    schema = DurativeActionSchema("noop", (), Fraction(1))
    act = ground_action(schema, [])
    assert act.requirements == frozenset() and act.positive_effects == frozenset()


def test_ground_arity(domain):
    with pytest.raises(ArityMismatch):
        ground_action(domain.action("move"), ["r2d2", "bedroom"])


def test_ground_type_check(domain):
    problem = parse_problem(SIMPLE_PROBLEM, domain)
    with pytest.raises(TypeMismatch):
        ground_action(domain.action("move"), ["kitchen", "bedroom", "living"], domain=domain, problem=problem)


def test_subtypes():
    d = parse_domain(read_fixture("restaurant_domain.pddl"))
    assert d.is_subtype("table", "location") and d.is_subtype("kitchen", "object")
    assert not d.is_subtype("robot", "location")


@pytest.mark.parametrize(
    "dom,prob,plan",
    [
        ("simple_domain.pddl", "simple_problem.pddl", "simple.plan"),
        ("restaurant_domain.pddl", "restaurant_r3.pddl", "restaurant_r3.plan"),
        ("restaurant_domain.pddl", "restaurant_r1.pddl", "restaurant_r1.plan"),
    ],
)
def test_fixture_round_trip(dom, prob, plan):
    d = parse_domain(read_fixture(dom))
    assert parse_domain(format_domain(d)) == d
    p = parse_problem(read_fixture(prob), d)
    assert parse_problem(format_problem(p), d) == p
    steps = parse_plan(read_fixture(plan), d)
    again = parse_plan(format_plan(steps), d)
    assert [(s.t, s.action_name, s.args, s.duration) for s in again] == [
        (s.t, s.action_name, s.args, s.duration) for s in steps
    ]


# -- generated domains ------------------------------------------------------

_ident = st.from_regex(r"[a-z][a-z0-9_]{0,5}", fullmatch=True).filter(
    lambda s: s not in {"and", "not", "at", "over", "object", "either", "define", "or"}
)


@st.composite
def domains(draw) -> Domain:
    names = draw(st.lists(_ident, min_size=1, max_size=12, unique=True))
    n_types = draw(st.integers(1, min(3, len(names))))
    types = tuple(names[:n_types])
    parents = {}
    for i, t in enumerate(types):
        if i and draw(st.booleans()):
            parents[t] = types[draw(st.integers(0, i - 1))]
    pool = names[n_types:] or ["p0"]
    pred_names = pool[: draw(st.integers(1, len(pool)))]
    all_types = list(types) + ["object"]
    preds = tuple(
        PredicateSchema(n, tuple((f"?v{k}", draw(st.sampled_from(all_types))) for k in range(draw(st.integers(0, 2)))))
        for n in pred_names
    )
    dom = Domain("gen", types, preds, (), parents)

    actions = []
    for ai in range(draw(st.integers(0, 3))):
        params = tuple((f"?x{k}", draw(st.sampled_from(types))) for k in range(draw(st.integers(0, 3))))
        conds, effs = [], []
        for _ in range(draw(st.integers(0, 4))):
            schema = draw(st.sampled_from(preds))
            terms = []
            for _, ptype in schema.parameters:
                fits = [v for v, vt in params if dom.is_subtype(vt, ptype)]
                if not fits:
                    break
                terms.append(draw(st.sampled_from(fits)))
            else:
                tmpl = Template(schema.name, tuple(terms))
                if draw(st.booleans()):
                    conds.append(Condition(draw(st.sampled_from(list(Phase))), tmpl, draw(st.booleans())))
                else:
                    phase = draw(st.sampled_from([Phase.AT_START, Phase.AT_END]))
                    effs.append(Effect(phase, tmpl, draw(st.booleans())))
        duration = Fraction(draw(st.integers(1, 400)), draw(st.sampled_from([1, 2, 4, 10])))
        actions.append(DurativeActionSchema(f"act{ai}", params, duration, tuple(conds), tuple(effs)))
    return Domain("gen", types, preds, tuple(actions), parents)


@settings(max_examples=150, deadline=None)
@given(domains())
def test_domain_round_trip(d):
    assert parse_domain(format_domain(d)) == d


@settings(max_examples=100, deadline=None)
@given(domains(), st.data())
def test_grounding_preserves_phase_polarity_multiset(d, data):
    if not d.actions:
        return
    schema = data.draw(st.sampled_from(d.actions))
    args = [f"o{i}" for i in range(schema.arity)]
    act = ground_action(schema, args)
    assert Counter((p, pos) for p, _, pos in act.conditions) == Counter((c.phase, c.positive) for c in schema.conditions)
    assert Counter((p, pos) for p, _, pos in act.effects) == Counter((e.phase, e.positive) for e in schema.effects)
    binding = dict(zip((v for v, _ in schema.parameters), args))
    assert all(a in binding.values() for _, g, _ in act.conditions + act.effects for a in g.args)


@settings(max_examples=100, deadline=None)
@given(
    st.lists(
        st.tuples(st.integers(0, 40), st.sampled_from([0, 1, 2]), st.integers(1, 9)),
        max_size=8,
    )
)
def test_plan_order_is_t_then_line(rows):
    d = parse_domain(SIMPLE_DOMAIN)
    text = "".join(f"{t}: (move r{k} a b) {dur}\n" for t, k, dur in rows)
    steps = parse_plan(text, d)
    assert [(s.t, s.line) for s in steps] == sorted((Fraction(t), i) for i, (t, _, _) in enumerate(rows, start=1))


def test_problem_round_trip_keeps_types(domain):
    p = parse_problem(SIMPLE_PROBLEM, domain)
    assert isinstance(p, Problem)
    assert parse_problem(format_problem(p), domain).objects == p.objects
