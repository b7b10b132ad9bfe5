"""Annotated nets: P/T capacities and arc weights, and inhibitor arcs.

Annotations live on the net itself (``ConditionNode.capacity``,
``Arc.weight``, ``Arc.inhibitor``), and the plain net-graph transform
already carries them into taggings.  This module adds the explicit
annotation objects, the checked transforms, and random annotators used by
the round-trip sweeps.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from .errors import InvalidInhibitor, MissingAnnotation
from .net import Arc, ConditionNode, Net
from .netgraph import NetGraph, net_to_netgraph


@dataclass(frozen=True)
class PtAnnotation:
    """Capacities per condition id (``None`` = unbounded) and weights per
    ``(source, target)`` arc."""

    capacities: dict = field(default_factory=dict)
    weights: dict = field(default_factory=dict)

    @classmethod
    def of(cls, net: Net) -> "PtAnnotation":
        return cls({c.id: c.capacity for c in net.conditions},
                   {(a.source, a.target): a.weight for a in net.arcs})


def annotate(net: Net, annotation: PtAnnotation) -> Net:
    """Apply ``annotation`` to ``net``; every arc needs a weight."""
    arc_keys = {(a.source, a.target) for a in net.arcs}
    unknown = set(annotation.weights) - arc_keys
    if unknown:
        raise MissingAnnotation(f"weights given for arcs not in the net: {sorted(unknown)}")
    missing = arc_keys - set(annotation.weights)
    if missing:
        raise MissingAnnotation(f"arcs without a weight: {sorted(missing)}")
    cond_ids = {c.id for c in net.conditions}
    unknown = set(annotation.capacities) - cond_ids
    if unknown:
        raise MissingAnnotation(f"capacities given for unknown conditions: {sorted(unknown)}")
    for key, w in annotation.weights.items():
        if not isinstance(w, int) or w < 1:
            raise MissingAnnotation(f"arc {key} needs a positive integer weight, got {w!r}")
    for cid, k in annotation.capacities.items():
        if k is not None and (not isinstance(k, int) or k < 1):
            raise MissingAnnotation(f"condition {cid!r} needs a positive capacity, got {k!r}")
    conditions = [ConditionNode(c.id, c.label, annotation.capacities.get(c.id)) for c in net.conditions]
    arcs = [Arc(a.source, a.target, annotation.weights[(a.source, a.target)], a.inhibitor) for a in net.arcs]
    return Net(net.id, conditions, net.events, arcs)


def pt_net_to_netgraph(net: Net, annotation: Optional[PtAnnotation] = None) -> NetGraph:
    """Net graph whose taggings carry capacities and weights."""
    if annotation is not None:
        net = annotate(net, annotation)
    return net_to_netgraph(net)


def check_inhibitors(net: Net) -> None:
    for a in net.arcs:
        if a.inhibitor and not net.is_condition(a.source):
            raise InvalidInhibitor(f"inhibitor arc {a.source!r}->{a.target!r} must run condition to event")


def mark_inhibitors(net: Net, inhibitors) -> Net:
    """Flag the given ``(condition, event)`` arcs as inhibitor arcs."""
    marks = set(inhibitors)
    present = {(a.source, a.target) for a in net.arcs}
    unknown = marks - present
    if unknown:
        raise InvalidInhibitor(f"no such arcs: {sorted(unknown)}")
    marked = Net(net.id, net.conditions, net.events,
                 [Arc(a.source, a.target, a.weight, a.inhibitor or (a.source, a.target) in marks)
                  for a in net.arcs])
    check_inhibitors(marked)
    return marked


def inhibitor_set(net: Net) -> frozenset:
    return frozenset((a.source, a.target) for a in net.arcs if a.inhibitor)


def inhibitor_net_to_netgraph(net: Net, inhibitors=None) -> NetGraph:
    """Net graph in which inhibitor inputs carry the double sign ``--``."""
    if inhibitors is not None:
        net = mark_inhibitors(net, inhibitors)
    check_inhibitors(net)
    return net_to_netgraph(net)


# ----------------------------------------------------------------------
# random annotators

def random_pt_annotation(net: Net, rng: random.Random, max_weight: int = 4, max_capacity: int = 6,
                         unbounded_share: float = 0.3) -> PtAnnotation:
    caps = {c.id: (None if rng.random() < unbounded_share else rng.randint(1, max_capacity))
            for c in net.conditions}
    weights = {(a.source, a.target): rng.randint(1, max_weight) for a in net.arcs}
    return PtAnnotation(caps, weights)


def random_inhibitors(net: Net, rng: random.Random, share: float = 0.1) -> frozenset:
    """Pick roughly ``share`` of the condition-to-event arcs."""
    inputs = [(a.source, a.target) for a in net.arcs if net.is_condition(a.source)]
    return frozenset(k for k in inputs if rng.random() < share)
