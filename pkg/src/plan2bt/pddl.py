"""Parser and grounder for the temporal PDDL subset consumed by plan2bt.

Supported: typed objects (with a type hierarchy), conjunctive durative-action
conditions anchored ``at start`` / ``over all`` / ``at end``, add/delete
effects anchored ``at start`` / ``at end``, constant ``:duration`` values,
and conjunctive goals. Anything else raises :class:`UnsupportedFeature`.
Identifiers are case-insensitive and normalized to lower case.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
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
from .sexpr import Atom, SExpr, SList, read_one

OBJECT = "object"


class Phase(Enum):
    AT_START = "at start"
    OVER_ALL = "over all"
    AT_END = "at end"


@dataclass(frozen=True, order=True)
class GroundedPredicate:
    name: str
    args: tuple[str, ...] = ()

    def __str__(self) -> str:
        return "(" + " ".join((self.name,) + self.args) + ")"

    @property
    def label(self) -> str:
        return f"{self.name}({','.join(self.args)})"


@dataclass(frozen=True)
class PredicateSchema:
    name: str
    parameters: tuple[tuple[str, str], ...]

    @property
    def arity(self) -> int:
        return len(self.parameters)


@dataclass(frozen=True)
class Template:
    """Predicate applied to action variables (``?x``) awaiting grounding."""

    name: str
    terms: tuple[str, ...]

    def ground(self, binding: Mapping[str, str]) -> GroundedPredicate:
        return GroundedPredicate(self.name, tuple(binding[v] for v in self.terms))

    def __str__(self) -> str:
        return "(" + " ".join((self.name,) + self.terms) + ")"


@dataclass(frozen=True)
class Condition:
    phase: Phase
    atom: Template
    positive: bool = True


@dataclass(frozen=True)
class Effect:
    phase: Phase
    atom: Template
    positive: bool = True


@dataclass(frozen=True)
class DurativeActionSchema:
    name: str
    parameters: tuple[tuple[str, str], ...]
    duration: Fraction
    conditions: tuple[Condition, ...] = ()
    effects: tuple[Effect, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.parameters)


@dataclass(frozen=True)
class Domain:
    name: str
    types: tuple[str, ...]
    predicates: tuple[PredicateSchema, ...]
    actions: tuple[DurativeActionSchema, ...]
    type_parents: Mapping[str, str] = field(default_factory=dict)
    requirements: tuple[str, ...] = ()

    def predicate(self, name: str) -> PredicateSchema:
        for p in self.predicates:
            if p.name == name:
                return p
        raise UnknownPredicate(f"unknown predicate {name!r} in domain {self.name!r}")

    def action(self, name: str) -> DurativeActionSchema:
        for a in self.actions:
            if a.name == name:
                return a
        raise UnknownAction(f"unknown action {name!r} in domain {self.name!r}")

    def is_subtype(self, child: str, parent: str) -> bool:
        if parent == OBJECT:
            return True
        seen = set()
        while child not in seen:
            if child == parent:
                return True
            seen.add(child)
            child = self.type_parents.get(child, OBJECT)
        return False


@dataclass(frozen=True)
class Problem:
    name: str
    domain_name: str
    objects: Mapping[str, str]
    init: frozenset[GroundedPredicate]
    goal: frozenset[GroundedPredicate]


@dataclass(frozen=True)
class PlanStep:
    t: Fraction
    action_name: str
    args: tuple[str, ...]
    duration: Fraction
    line: int = 0

    @property
    def label(self) -> str:
        return f"{self.action_name}({','.join(self.args)})"


@dataclass(frozen=True)
class GroundedAction:
    name: str
    args: tuple[str, ...]
    duration: Fraction
    conditions: tuple[tuple[Phase, GroundedPredicate, bool], ...] = ()
    effects: tuple[tuple[Phase, GroundedPredicate, bool], ...] = ()

    @property
    def label(self) -> str:
        return f"{self.name}({','.join(self.args)})"

    def _conds(self, phase: Phase, positive: bool) -> frozenset[GroundedPredicate]:
        return frozenset(p for ph, p, pos in self.conditions if ph is phase and pos is positive)

    def _effs(self, phase: Phase, positive: bool) -> frozenset[GroundedPredicate]:
        return frozenset(p for ph, p, pos in self.effects if ph is phase and pos is positive)

    @property
    def req_at_start(self) -> frozenset[GroundedPredicate]:
        return self._conds(Phase.AT_START, True)

    @property
    def req_over_all(self) -> frozenset[GroundedPredicate]:
        return self._conds(Phase.OVER_ALL, True)

    @property
    def req_at_end(self) -> frozenset[GroundedPredicate]:
        return self._conds(Phase.AT_END, True)

    @property
    def neg_at_start(self) -> frozenset[GroundedPredicate]:
        return self._conds(Phase.AT_START, False)

    @property
    def neg_over_all(self) -> frozenset[GroundedPredicate]:
        return self._conds(Phase.OVER_ALL, False)

    @property
    def neg_at_end(self) -> frozenset[GroundedPredicate]:
        return self._conds(Phase.AT_END, False)

    @property
    def eff_add_at_start(self) -> frozenset[GroundedPredicate]:
        return self._effs(Phase.AT_START, True)

    @property
    def eff_add_at_end(self) -> frozenset[GroundedPredicate]:
        return self._effs(Phase.AT_END, True)

    @property
    def eff_del_at_start(self) -> frozenset[GroundedPredicate]:
        return self._effs(Phase.AT_START, False)

    @property
    def eff_del_at_end(self) -> frozenset[GroundedPredicate]:
        return self._effs(Phase.AT_END, False)

    @property
    def requirements(self) -> frozenset[GroundedPredicate]:
        """All positive conditions regardless of phase."""
        return frozenset(p for _, p, pos in self.conditions if pos)

    @property
    def positive_effects(self) -> frozenset[GroundedPredicate]:
        return self.eff_add_at_start | self.eff_add_at_end


# --------------------------------------------------------------------------
# s-expression helpers


def _where(expr: SExpr) -> tuple[int, int]:
    return expr.line, expr.column


def _unsupported(what: str, expr: SExpr) -> UnsupportedFeature:
    line, col = _where(expr)
    return UnsupportedFeature(f"unsupported PDDL construct {what} (line {line}, column {col})")


def _expect_list(expr: SExpr, what: str) -> SList:
    if not isinstance(expr, SList):
        raise ParseError(f"expected {what}, found {expr.text!r}", *_where(expr))
    return expr


def _expect_atom(expr: SExpr, what: str) -> str:
    if not isinstance(expr, Atom):
        raise ParseError(f"expected {what}, found a list", *_where(expr))
    return expr.text


def _head(expr: SExpr) -> str | None:
    if isinstance(expr, SList) and expr.items and isinstance(expr.items[0], Atom):
        return expr.items[0].text
    return None


def _typed_list(items: Sequence[SExpr]) -> list[tuple[str, str]]:
    """Parse ``a b - t1 c - t2 d`` into ``[(a,t1),(b,t1),(c,t2),(d,object)]``."""
    out: list[tuple[str, str]] = []
    pending: list[str] = []
    i = 0
    while i < len(items):
        item = items[i]
        if isinstance(item, SList):
            raise _unsupported("(either ...) or nested list in typed list", item)
        if item.text == "-":
            if i + 1 >= len(items):
                raise ParseError("missing type after '-'", *_where(item))
            typ = items[i + 1]
            if isinstance(typ, SList):
                raise _unsupported("(either ...) types", typ)
            if not pending:
                raise ParseError("'-' without preceding names", *_where(item))
            out.extend((name, typ.text) for name in pending)
            pending = []
            i += 2
            continue
        pending.append(item.text)
        i += 1
    out.extend((name, OBJECT) for name in pending)
    return out


def _parse_number(expr: SExpr, what: str) -> Fraction:
    text = _expect_atom(expr, what)
    try:
        return Fraction(text)
    except ValueError:
        raise ParseError(f"expected a number for {what}, found {text!r}", *_where(expr)) from None


_UNSUPPORTED_HEADS = {
    "or": "disjunctive conditions",
    "imply": "implications",
    "forall": "universal quantifiers",
    "exists": "existential quantifiers",
    "when": "conditional effects",
    "=": "equality / numeric comparisons",
    "<": "numeric comparisons",
    ">": "numeric comparisons",
    "<=": "numeric comparisons",
    ">=": "numeric comparisons",
    "increase": "numeric fluents",
    "decrease": "numeric fluents",
    "assign": "numeric fluents",
    "scale-up": "numeric fluents",
    "scale-down": "numeric fluents",
}


def _atom_template(expr: SExpr) -> Template:
    lst = _expect_list(expr, "predicate")
    head = _head(lst)
    if head is None:
        raise ParseError("empty or malformed predicate", *_where(expr))
    if head in _UNSUPPORTED_HEADS:
        raise _unsupported(_UNSUPPORTED_HEADS[head], expr)
    terms = []
    for term in lst.items[1:]:
        text = _expect_atom(term, "predicate argument")
        if not text.startswith("?"):
            raise _unsupported(f"constant {text!r} in action schema", term)
        terms.append(text)
    return Template(head, tuple(terms))


def _literal(expr: SExpr) -> tuple[Template, bool]:
    if _head(expr) == "not":
        lst = expr
        if len(lst) != 2:
            raise ParseError("(not ...) takes exactly one argument", *_where(expr))
        return _atom_template(lst[1]), False
    return _atom_template(expr), True


def _conjuncts(expr: SExpr) -> list[SExpr]:
    lst = _expect_list(expr, "condition or effect")
    if not lst.items:
        return []
    if _head(lst) == "and":
        out: list[SExpr] = []
        for item in lst.items[1:]:
            out.extend(_conjuncts(item))
        return out
    return [lst]


def _timed(expr: SExpr, allowed: tuple[Phase, ...]) -> tuple[Phase, SExpr]:
    lst = _expect_list(expr, "timed expression")
    items = lst.items
    if len(items) == 3 and all(isinstance(x, Atom) for x in items[:2]):
        key = f"{items[0].text} {items[1].text}"
        for phase in Phase:
            if phase.value == key:
                if phase not in allowed:
                    raise _unsupported(f"'{key}' in this position", expr)
                return phase, items[2]
    head = _head(lst)
    if head in _UNSUPPORTED_HEADS:
        raise _unsupported(_UNSUPPORTED_HEADS[head], expr)
    if head == "at" and len(items) == 3:
        raise _unsupported("timed literal with a numeric time point", expr)
    raise ParseError(
        "durative-action conditions/effects must be wrapped in "
        + " / ".join(f"({p.value} ...)" for p in allowed),
        *_where(expr),
    )


def _parse_conditions(expr: SExpr) -> tuple[Condition, ...]:
    out = []
    for item in _conjuncts(expr):
        phase, body = _timed(item, (Phase.AT_START, Phase.OVER_ALL, Phase.AT_END))
        for lit in _conjuncts(body):
            tmpl, positive = _literal(lit)
            out.append(Condition(phase, tmpl, positive))
    return tuple(out)


def _parse_effects(expr: SExpr) -> tuple[Effect, ...]:
    out = []
    for item in _conjuncts(expr):
        phase, body = _timed(item, (Phase.AT_START, Phase.AT_END))
        for lit in _conjuncts(body):
            tmpl, positive = _literal(lit)
            out.append(Effect(phase, tmpl, positive))
    return tuple(out)


def _parse_duration(expr: SExpr) -> Fraction:
    lst = _expect_list(expr, ":duration constraint")
    if _head(lst) != "=" or len(lst) != 3 or _expect_atom(lst[1], "?duration") != "?duration":
        raise _unsupported("non-constant duration constraint", expr)
    value = _parse_number(lst[2], "duration")
    if value < 0:
        raise InvalidDuration(f"negative duration {value} (line {lst.line})")
    return value


def _parse_durative_action(lst: SList) -> DurativeActionSchema:
    if len(lst) < 2:
        raise ParseError("durative action without a name", *_where(lst))
    name = _expect_atom(lst[1], "action name")
    parameters: list[tuple[str, str]] = []
    duration = None
    conditions: tuple[Condition, ...] = ()
    effects: tuple[Effect, ...] = ()
    items = lst.items[2:]
    if len(items) % 2:
        raise ParseError(f"odd number of keyword/value items in action {name!r}", *_where(lst))
    for key_expr, value in zip(items[::2], items[1::2]):
        key = _expect_atom(key_expr, "action keyword")
        if key == ":parameters":
            parameters = _typed_list(_expect_list(value, "parameter list").items)
        elif key == ":duration":
            duration = _parse_duration(value)
        elif key == ":condition":
            conditions = _parse_conditions(value)
        elif key == ":effect":
            effects = _parse_effects(value)
        else:
            raise _unsupported(f"action keyword {key!r}", key_expr)
    if duration is None:
        raise ParseError(f"action {name!r} has no :duration", *_where(lst))
    return DurativeActionSchema(name, tuple(parameters), duration, conditions, effects)


def _check_domain(domain: Domain) -> None:
    declared = set(domain.types) | {OBJECT}
    seen_preds: set[str] = set()
    for p in domain.predicates:
        if p.name in seen_preds:
            raise ParseError(f"duplicate predicate {p.name!r}")
        seen_preds.add(p.name)
        for var, typ in p.parameters:
            if typ not in declared:
                raise TypeMismatch(f"predicate {p.name!r} uses undeclared type {typ!r}")
    for child, parent in domain.type_parents.items():
        if parent not in declared:
            raise TypeMismatch(f"type {child!r} has undeclared parent {parent!r}")
    seen_actions: set[str] = set()
    for a in domain.actions:
        if a.name in seen_actions:
            raise ParseError(f"duplicate action {a.name!r}")
        seen_actions.add(a.name)
        params = dict(a.parameters)
        if len(params) != len(a.parameters):
            raise ParseError(f"duplicate parameter in action {a.name!r}")
        for var, typ in a.parameters:
            if typ not in declared:
                raise TypeMismatch(f"action {a.name!r} uses undeclared type {typ!r}")
        for tmpl in [c.atom for c in a.conditions] + [e.atom for e in a.effects]:
            schema = domain.predicate(tmpl.name)
            if len(tmpl.terms) != schema.arity:
                raise ArityMismatch(
                    f"{tmpl} in action {a.name!r}: {tmpl.name} takes {schema.arity} arguments"
                )
            for term, (_, ptype) in zip(tmpl.terms, schema.parameters):
                if term not in params:
                    raise ParseError(f"variable {term} in action {a.name!r} is not a parameter")
                if not domain.is_subtype(params[term], ptype):
                    raise TypeMismatch(
                        f"{tmpl} in action {a.name!r}: {term} is {params[term]}, expected {ptype}"
                    )


def parse_domain(text: str) -> Domain:
    """Parse a ``(define (domain ...))`` document."""
    root = _expect_list(read_one(text), "(define ...)")
    if _head(root) != "define" or len(root) < 2:
        raise ParseError("domain must start with (define (domain <name>) ...)", *_where(root))
    header = _expect_list(root[1], "(domain <name>)")
    if _head(header) != "domain" or len(header) != 2:
        raise ParseError("expected (domain <name>)", *_where(header))
    name = _expect_atom(header[1], "domain name")

    types: list[str] = []
    parents: dict[str, str] = {}
    predicates: list[PredicateSchema] = []
    actions: list[DurativeActionSchema] = []
    requirements: tuple[str, ...] = ()
    for section in root.items[2:]:
        sec = _expect_list(section, "domain section")
        key = _head(sec)
        if key == ":requirements":
            requirements = tuple(_expect_atom(x, "requirement flag") for x in sec.items[1:])
        elif key == ":types":
            for t, parent in _typed_list(sec.items[1:]):
                if t == OBJECT:
                    continue
                if t not in types:
                    types.append(t)
                if parent != OBJECT:
                    parents[t] = parent
                if parent != OBJECT and parent not in types:
                    types.append(parent)
        elif key == ":predicates":
            for p in sec.items[1:]:
                plist = _expect_list(p, "predicate declaration")
                pname = _expect_atom(plist[0], "predicate name") if plist.items else None
                if pname is None:
                    raise ParseError("empty predicate declaration", *_where(p))
                predicates.append(PredicateSchema(pname, tuple(_typed_list(plist.items[1:]))))
        elif key == ":durative-action":
            actions.append(_parse_durative_action(sec))
        elif key == ":action":
            raise _unsupported("non-durative :action", sec)
        elif key in (":functions", ":constants", ":derived", ":constraints"):
            raise _unsupported(key, sec)
        else:
            raise _unsupported(f"domain section {key!r}", sec)

    domain = Domain(name, tuple(types), tuple(predicates), tuple(actions), parents, requirements)
    _check_domain(domain)
    return domain


def _ground_fact(expr: SExpr) -> GroundedPredicate:
    lst = _expect_list(expr, "ground predicate")
    head = _head(lst)
    if head is None:
        raise ParseError("empty or malformed predicate", *_where(expr))
    if head == "not":
        raise _unsupported("negative literal in problem", expr)
    if head == "at" and len(lst) == 3 and isinstance(lst[1], Atom):
        try:
            Fraction(lst[1].text)
        except ValueError:
            pass
        else:
            raise _unsupported("timed initial literal", expr)
    if head in _UNSUPPORTED_HEADS:
        raise _unsupported(_UNSUPPORTED_HEADS[head], expr)
    args = tuple(_expect_atom(a, "object name") for a in lst.items[1:])
    return GroundedPredicate(head, args)


def check_fact(domain: Domain, objects: Mapping[str, str], fact: GroundedPredicate) -> None:
    """Raise if ``fact`` does not match its predicate schema under ``objects``."""
    schema = domain.predicate(fact.name)
    if len(fact.args) != schema.arity:
        raise ArityMismatch(f"{fact} has {len(fact.args)} arguments, expected {schema.arity}")
    for arg, (_, ptype) in zip(fact.args, schema.parameters):
        if arg not in objects:
            raise UnknownObject(f"undeclared object {arg!r} in {fact}")
        if not domain.is_subtype(objects[arg], ptype):
            raise TypeMismatch(f"in {fact}: {arg} is {objects[arg]}, expected {ptype}")


def parse_problem(text: str, domain: Domain) -> Problem:
    """Parse a ``(define (problem ...))`` document and check it against ``domain``."""
    root = _expect_list(read_one(text), "(define ...)")
    if _head(root) != "define" or len(root) < 2:
        raise ParseError("problem must start with (define (problem <name>) ...)", *_where(root))
    header = _expect_list(root[1], "(problem <name>)")
    if _head(header) != "problem" or len(header) != 2:
        raise ParseError("expected (problem <name>)", *_where(header))
    name = _expect_atom(header[1], "problem name")

    domain_name = None
    objects: dict[str, str] = {}
    init: list[GroundedPredicate] = []
    goal: list[GroundedPredicate] = []
    for section in root.items[2:]:
        sec = _expect_list(section, "problem section")
        key = _head(sec)
        if key == ":domain":
            domain_name = _expect_atom(sec[1], "domain name") if len(sec) == 2 else None
            if domain_name is None:
                raise ParseError("expected (:domain <name>)", *_where(sec))
        elif key == ":requirements":
            pass
        elif key == ":objects":
            declared = set(domain.types) | {OBJECT}
            for obj, typ in _typed_list(sec.items[1:]):
                if typ not in declared:
                    raise TypeMismatch(f"object {obj!r} has undeclared type {typ!r}")
                if obj in objects and objects[obj] != typ:
                    raise TypeMismatch(f"object {obj!r} declared twice with different types")
                objects[obj] = typ
        elif key == ":init":
            init.extend(_ground_fact(x) for x in sec.items[1:])
        elif key == ":goal":
            if len(sec) != 2:
                raise ParseError("expected (:goal <formula>)", *_where(sec))
            goal.extend(_ground_fact(x) for x in _conjuncts(sec[1]))
        else:
            raise _unsupported(f"problem section {key!r}", sec)

    if domain_name is None:
        raise ParseError("problem has no (:domain ...) section", *_where(root))
    if domain_name != domain.name:
        raise DomainMismatch(f"problem is for domain {domain_name!r}, not {domain.name!r}")
    for fact in init + goal:
        check_fact(domain, objects, fact)
    return Problem(name, domain_name, objects, frozenset(init), frozenset(goal))


_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)"
_PLAN_LINE = re.compile(
    rf"^(?P<t>{_NUM})\s*:?\s*\((?P<body>[^()]*)\)\s*(?:\[\s*(?P<bd>{_NUM})\s*\]|(?P<d>{_NUM}))?$"
)


def parse_plan(text: str, domain: Domain) -> list[PlanStep]:
    """Parse solver output lines ``<t>[:] (<name> <arg>*) [<duration>]``.

    The duration may be bare or in square brackets. When absent it is taken
    from the action schema. Steps are returned sorted by start time, keeping
    input order for equal times.
    """
    steps = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(";", 1)[0].strip()
        if not line:
            continue
        m = _PLAN_LINE.match(line)
        if m is None:
            raise ParseError(f"malformed plan line {raw.strip()!r}", lineno, 1)
        body = m.group("body").lower().split()
        if not body:
            raise ParseError("empty action in plan line", lineno, 1)
        name, args = body[0], tuple(body[1:])
        try:
            schema = domain.action(name)
        except UnknownAction as exc:
            raise UnknownAction(f"{exc} (plan line {lineno})") from None
        if len(args) != schema.arity:
            raise ArityMismatch(
                f"{name} takes {schema.arity} arguments, got {len(args)} (plan line {lineno})"
            )
        dtext = m.group("bd") or m.group("d")
        duration = Fraction(dtext) if dtext is not None else schema.duration
        if duration <= 0:
            raise InvalidDuration(f"non-positive duration {duration} (plan line {lineno})")
        steps.append(PlanStep(Fraction(m.group("t")), name, args, duration, lineno))
    steps.sort(key=lambda s: s.t)
    return steps


def ground_action(
    schema: DurativeActionSchema,
    args: Sequence[str],
    duration: Fraction | None = None,
    *,
    domain: Domain | None = None,
    problem: Problem | None = None,
) -> GroundedAction:
    """Substitute ``args`` for the schema parameters.

    With both ``domain`` and ``problem`` given, argument types are checked
    against the problem's object declarations.
    """
    args = tuple(args)
    if len(args) != schema.arity:
        raise ArityMismatch(f"{schema.name} takes {schema.arity} arguments, got {len(args)}")
    if domain is not None and problem is not None:
        for arg, (var, ptype) in zip(args, schema.parameters):
            if arg not in problem.objects:
                raise UnknownObject(f"undeclared object {arg!r} in {schema.name}{args}")
            if not domain.is_subtype(problem.objects[arg], ptype):
                raise TypeMismatch(
                    f"{schema.name}: {arg} is {problem.objects[arg]}, expected {ptype} for {var}"
                )
    binding = {var: arg for (var, _), arg in zip(schema.parameters, args)}
    return GroundedAction(
        schema.name,
        args,
        schema.duration if duration is None else Fraction(duration),
        tuple((c.phase, c.atom.ground(binding), c.positive) for c in schema.conditions),
        tuple((e.phase, e.atom.ground(binding), e.positive) for e in schema.effects),
    )


# --------------------------------------------------------------------------
# pretty printing


def _fmt_number(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    # exact decimal when one exists, otherwise a ratio PDDL readers will reject
    d = value.denominator
    while d % 2 == 0:
        d //= 2
    while d % 5 == 0:
        d //= 5
    if d != 1:
        raise ValueError(f"{value} has no finite decimal representation")
    whole, digits = divmod(abs(value.numerator) * 10**40 // value.denominator, 10**40)
    sign = "-" if value < 0 else ""
    return f"{sign}{whole}.{str(digits).rjust(40, '0').rstrip('0')}"


def _fmt_typed(pairs: Iterable[tuple[str, str]]) -> str:
    return " ".join(f"{name} - {typ}" for name, typ in pairs)


def _fmt_literal(atom: object, positive: bool) -> str:
    return str(atom) if positive else f"(not {atom})"


def format_domain(domain: Domain) -> str:
    lines = [f"(define (domain {domain.name})"]
    if domain.requirements:
        lines.append(f"  (:requirements {' '.join(domain.requirements)})")
    if domain.types:
        lines.append(
            "  (:types " + " ".join(f"{t} - {domain.type_parents.get(t, OBJECT)}" for t in domain.types) + ")"
        )
    lines.append("  (:predicates")
    for p in domain.predicates:
        params = _fmt_typed(p.parameters)
        lines.append(f"    ({p.name}{' ' + params if params else ''})")
    lines.append("  )")
    for a in domain.actions:
        lines.append(f"  (:durative-action {a.name}")
        lines.append(f"    :parameters ({_fmt_typed(a.parameters)})")
        lines.append(f"    :duration (= ?duration {_fmt_number(a.duration)})")
        conds = " ".join(f"({c.phase.value} {_fmt_literal(c.atom, c.positive)})" for c in a.conditions)
        effs = " ".join(f"({e.phase.value} {_fmt_literal(e.atom, e.positive)})" for e in a.effects)
        lines.append(f"    :condition (and {conds})")
        lines.append(f"    :effect (and {effs}))")
    lines.append(")")
    return "\n".join(lines) + "\n"


def format_problem(problem: Problem) -> str:
    lines = [f"(define (problem {problem.name})", f"  (:domain {problem.domain_name})"]
    lines.append("  (:objects " + _fmt_typed(sorted(problem.objects.items())) + ")")
    lines.append("  (:init")
    lines.extend(f"    {fact}" for fact in sorted(problem.init))
    lines.append("  )")
    lines.append("  (:goal (and " + " ".join(str(g) for g in sorted(problem.goal)) + "))")
    lines.append(")")
    return "\n".join(lines) + "\n"


def format_plan(plan: Iterable[PlanStep]) -> str:
    return "".join(
        f"{_fmt_number(s.t)}: ({' '.join((s.action_name,) + s.args)}) [{_fmt_number(s.duration)}]\n"
        for s in plan
    )
