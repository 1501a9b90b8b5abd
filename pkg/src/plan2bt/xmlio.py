"""XML form of compiled behavior trees.

The document root is ``<BehaviorTree>`` with zero children (empty plan) or
one child node. Element names match the node classes; unit references are
written as ``id="a<n>"``. See ``docs/behavior_tree.xsd``.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET

from .errors import DanglingActionId, ParseError, TreeBuildError, UnknownNodeKind
from .graph import PlanGraph
from .pddl import GroundedPredicate, Phase
from .tree import (
    ActionInstance,
    ActionRef,
    ApplyEffects,
    BehaviorTree,
    BTNode,
    Condition,
    ExecuteLeaf,
    Parallel,
    Sequence,
    WaitFor,
    instance_ids,
)

_PHASES = {"start": Phase.AT_START, "end": Phase.AT_END}


def _element(node: BTNode, graph_labels: dict[int, str]) -> ET.Element:
    if isinstance(node, (Sequence, Parallel)):
        el = ET.Element(type(node).__name__)
        for child in node.children:
            el.append(_element(child, graph_labels))
        return el
    if isinstance(node, Condition):
        el = ET.Element("Condition", polarity="positive" if node.positive else "negative")
        for pred in sorted(node.predicates):
            ET.SubElement(el, "Predicate", name=pred.name, args=" ".join(pred.args))
        return el
    if isinstance(node, WaitFor):
        return ET.Element("WaitFor", id=f"a{node.unit}")
    if isinstance(node, ActionRef):
        attrs = {"id": f"a{node.unit}"}
        if node.unit in graph_labels:
            attrs["name"] = graph_labels[node.unit]
        return ET.Element("Action", attrs)
    if isinstance(node, ApplyEffects):
        phase = "start" if node.phase is Phase.AT_START else "end"
        return ET.Element("ApplyEffects", id=f"a{node.unit}", phase=phase)
    if isinstance(node, ExecuteLeaf):
        return ET.Element("Execute", id=f"a{node.unit}")
    raise TypeError(f"not a behavior-tree node: {node!r}")


def to_xml(tree: BehaviorTree) -> str:
    labels = {uid: inst.unit.label for uid, inst in tree.registry.items()}
    root = ET.Element("BehaviorTree")
    if tree.root is not None:
        root.append(_element(tree.root, labels))
    ET.indent(root, space="  ")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def _unit_id(el: ET.Element, graph: PlanGraph) -> int:
    raw = el.get("id")
    if raw is None or not raw.startswith("a") or not raw[1:].isdigit():
        raise ParseError(f"<{el.tag}> needs an id of the form a<number>, got {raw!r}")
    uid = int(raw[1:])
    if not any(u.id == uid for u in graph.units):
        raise DanglingActionId(f"<{el.tag} id={raw!r}> does not name a unit of the graph")
    return uid


def _node(el: ET.Element, graph: PlanGraph) -> BTNode:
    tag = el.tag
    if tag in ("Sequence", "Parallel"):
        children = tuple(_node(c, graph) for c in el)
        try:
            return Sequence(children) if tag == "Sequence" else Parallel(children)
        except TreeBuildError as exc:
            raise ParseError(str(exc)) from None
    if tag == "Condition":
        polarity = el.get("polarity", "positive")
        if polarity not in ("positive", "negative"):
            raise ParseError(f"bad Condition polarity {polarity!r}")
        preds = []
        for p in el:
            if p.tag != "Predicate" or p.get("name") is None:
                raise UnknownNodeKind(f"unexpected <{p.tag}> inside <Condition>")
            preds.append(GroundedPredicate(p.get("name"), tuple(p.get("args", "").split())))
        return Condition(frozenset(preds), polarity == "positive")
    if tag == "WaitFor":
        return WaitFor(_unit_id(el, graph))
    if tag == "Action":
        return ActionRef(_unit_id(el, graph))
    if tag == "ApplyEffects":
        phase = _PHASES.get(el.get("phase", ""))
        if phase is None:
            raise ParseError(f"bad ApplyEffects phase {el.get('phase')!r}")
        return ApplyEffects(_unit_id(el, graph), phase)
    if tag == "Execute":
        return ExecuteLeaf(_unit_id(el, graph))
    raise UnknownNodeKind(f"unknown node kind <{tag}>")


def from_xml(text: str, graph: PlanGraph) -> BehaviorTree:
    """Rebuild a tree, resolving unit ids against ``graph``."""
    try:
        doc = ET.fromstring(text)
    except ET.ParseError as exc:
        line, col = exc.position
        raise ParseError(f"malformed XML: {exc.msg.split(': line')[0]}", line, col) from None
    if doc.tag != "BehaviorTree":
        raise UnknownNodeKind(f"document root must be <BehaviorTree>, got <{doc.tag}>")
    children = list(doc)
    if len(children) > 1:
        raise ParseError("<BehaviorTree> holds at most one root node")
    if not children:
        return BehaviorTree(None, {})
    root = _node(children[0], graph)
    return BehaviorTree(root, {uid: ActionInstance(graph.unit(uid)) for uid in sorted(instance_ids(root))})
