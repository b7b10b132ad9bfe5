"""Pure C/E nets: construction, structural predicates, closure and isomorphism.

Nodes carry an internal id (unique within a net) and a label.  Everything
that compares nets for mining purposes looks at labels only; ids exist so
that "the same condition node" is a checkable statement.
"""
from __future__ import annotations

import string
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import MalformedNet, SizeGuardExceeded, UnknownNode

RESERVED_CHARS = frozenset("(),+-")
_PRINTABLE = frozenset(string.printable) - frozenset("\t\n\r\x0b\x0c")

# capacity None means unbounded
INF = None


def check_label(label: str) -> str:
    if not isinstance(label, str) or not label:
        raise MalformedNet(f"label must be a nonempty string, got {label!r}")
    bad = set(label) - _PRINTABLE
    if bad:
        raise MalformedNet(f"label {label!r} contains non-printable characters")
    bad = set(label) & RESERVED_CHARS
    if bad:
        raise MalformedNet(f"label {label!r} contains reserved characters {''.join(sorted(bad))!r}")
    return label


@dataclass(frozen=True)
class ConditionNode:
    id: str
    label: str
    capacity: Optional[int] = INF


@dataclass(frozen=True)
class EventNode:
    id: str
    label: str


@dataclass(frozen=True)
class Arc:
    source: str
    target: str
    weight: int = 1
    inhibitor: bool = False


@dataclass(frozen=True)
class SubclassReport:
    is_pure: bool
    is_connected: bool
    is_strongly_connected: bool
    is_s_graph: bool
    is_t_graph: bool
    is_free_choice: bool
    is_occurrence: bool


class Net:
    """An immutable C/E net ``(C, E; F)``.

    Purity is not enforced here (impure nets are representable so that they
    can be classified); the net-graph transform rejects them.
    """

    __slots__ = ("id", "conditions", "events", "arcs", "_cond", "_event",
                 "_arc", "_pre", "_post")

    def __init__(self, net_id: str, conditions: Iterable[ConditionNode],
                 events: Iterable[EventNode], arcs: Iterable[Arc]):
        conditions = tuple(conditions)
        events = tuple(events)
        arcs = tuple(arcs)
        if not conditions and not events:
            raise MalformedNet(f"net {net_id!r} has no nodes")
        cond = {}
        for c in conditions:
            check_label(c.label)
            if c.id in cond:
                raise MalformedNet(f"duplicate condition id {c.id!r}")
            if c.capacity is not None and (not isinstance(c.capacity, int) or c.capacity < 1):
                raise MalformedNet(f"capacity of {c.id!r} must be a positive integer or infinity")
            cond[c.id] = c
        event = {}
        for e in events:
            check_label(e.label)
            if e.id in event or e.id in cond:
                raise MalformedNet(f"duplicate node id {e.id!r}")
            event[e.id] = e
        arc_index = {}
        pre = {x: [] for x in (*cond, *event)}
        post = {x: [] for x in (*cond, *event)}
        for a in arcs:
            if a.source not in pre or a.target not in pre:
                raise MalformedNet(f"arc {a.source!r}->{a.target!r} references a missing node")
            if (a.source in cond) == (a.target in cond):
                raise MalformedNet(f"arc {a.source!r}->{a.target!r} joins two nodes of the same kind")
            if (a.source, a.target) in arc_index:
                raise MalformedNet(f"duplicate arc {a.source!r}->{a.target!r}")
            if not isinstance(a.weight, int) or a.weight < 1:
                raise MalformedNet(f"arc {a.source!r}->{a.target!r} has non-positive weight")
            arc_index[(a.source, a.target)] = a
            post[a.source].append(a.target)
            pre[a.target].append(a.source)
        set_ = object.__setattr__
        set_(self, "id", net_id)
        set_(self, "conditions", conditions)
        set_(self, "events", events)
        set_(self, "arcs", arcs)
        set_(self, "_cond", cond)
        set_(self, "_event", event)
        set_(self, "_arc", arc_index)
        set_(self, "_pre", {k: tuple(v) for k, v in pre.items()})
        set_(self, "_post", {k: tuple(v) for k, v in post.items()})

    def __setattr__(self, name, value):
        raise AttributeError("Net is immutable")

    def __repr__(self):
        return (f"Net({self.id!r}, {len(self.conditions)} conditions, "
                f"{len(self.events)} events, {len(self.arcs)} arcs)")

    def __eq__(self, other):
        if not isinstance(other, Net):
            return NotImplemented
        return (self.id == other.id and set(self.conditions) == set(other.conditions)
                and set(self.events) == set(other.events) and set(self.arcs) == set(other.arcs))

    def __hash__(self):
        return hash((self.id, frozenset(self.conditions), frozenset(self.events), frozenset(self.arcs)))

    # lookups -----------------------------------------------------------
    def is_condition(self, node_id: str) -> bool:
        return node_id in self._cond

    def is_event(self, node_id: str) -> bool:
        return node_id in self._event

    def condition(self, node_id: str) -> ConditionNode:
        try:
            return self._cond[node_id]
        except KeyError:
            raise UnknownNode(f"no condition {node_id!r} in net {self.id!r}") from None

    def event(self, node_id: str) -> EventNode:
        try:
            return self._event[node_id]
        except KeyError:
            raise UnknownNode(f"no event {node_id!r} in net {self.id!r}") from None

    def node(self, node_id: str):
        if node_id in self._cond:
            return self._cond[node_id]
        if node_id in self._event:
            return self._event[node_id]
        raise UnknownNode(f"no node {node_id!r} in net {self.id!r}")

    def label(self, node_id: str) -> str:
        return self.node(node_id).label

    def arc(self, source: str, target: str) -> Optional[Arc]:
        return self._arc.get((source, target))

    def preset(self, node_id: str) -> tuple:
        if node_id not in self._pre:
            raise UnknownNode(f"no node {node_id!r} in net {self.id!r}")
        return self._pre[node_id]

    def postset(self, node_id: str) -> tuple:
        if node_id not in self._post:
            raise UnknownNode(f"no node {node_id!r} in net {self.id!r}")
        return self._post[node_id]

    def neighbours(self, node_id: str) -> tuple:
        return self.preset(node_id) + self.postset(node_id)

    def with_id(self, net_id: str) -> "Net":
        return Net(net_id, self.conditions, self.events, self.arcs)


# ----------------------------------------------------------------------
# structural predicates

def adjacency(net: Net, node_id: str) -> tuple[frozenset, frozenset]:
    """Return ``(preset, postset)`` of a node as frozensets of node ids."""
    return frozenset(net.preset(node_id)), frozenset(net.postset(node_id))


def is_pure(net: Net) -> bool:
    return not any((a.target, a.source) in net._arc for a in net.arcs)


def _components(net: Net) -> list[set]:
    seen = set()
    comps = []
    for start in (*net._cond, *net._event):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        seen.add(start)
        while stack:
            x = stack.pop()
            for y in net._pre[x] + net._post[x]:
                if y not in seen:
                    seen.add(y)
                    comp.add(y)
                    stack.append(y)
        comps.append(comp)
    return comps


def is_connected(net: Net) -> bool:
    return len(_components(net)) == 1


def _reach(net: Net, start: str, forward: bool) -> set:
    step = net._post if forward else net._pre
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in step[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def is_strongly_connected(net: Net) -> bool:
    nodes = (*net._cond, *net._event)
    if len(nodes) == 1:
        return True
    start = nodes[0]
    total = len(nodes)
    return len(_reach(net, start, True)) == total and len(_reach(net, start, False)) == total


def is_acyclic(net: Net) -> bool:
    indeg = {x: len(p) for x, p in net._pre.items()}
    queue = [x for x, d in indeg.items() if d == 0]
    done = 0
    while queue:
        x = queue.pop()
        done += 1
        for y in net._post[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                queue.append(y)
    return done == len(indeg)


def validate_and_classify(net: Net) -> SubclassReport:
    """Compute purity, connectivity and subclass membership flags."""
    pre, post = net._pre, net._post
    events = [e.id for e in net.events]
    conds = [c.id for c in net.conditions]
    s_graph = all(len(pre[e]) == 1 and len(post[e]) == 1 for e in events)
    t_graph = all(len(pre[c]) == 1 and len(post[c]) == 1 for c in conds)
    free_choice = True
    consumers = defaultdict(list)
    for e in events:
        for c in pre[e]:
            consumers[c].append(e)
    for c, es in consumers.items():
        if len(es) > 1 and any(len(pre[e]) != 1 for e in es):
            free_choice = False
            break
    occurrence = is_acyclic(net) and all(len(pre[c]) <= 1 and len(post[c]) <= 1 for c in conds)
    connected = is_connected(net)
    return SubclassReport(
        is_pure=is_pure(net),
        is_connected=connected,
        is_strongly_connected=connected and is_strongly_connected(net),
        is_s_graph=s_graph,
        is_t_graph=t_graph,
        is_free_choice=free_choice,
        is_occurrence=occurrence,
    )


def event_components(net: Net, event_ids: Optional[Iterable[str]] = None) -> list[list[str]]:
    """Group events into classes connected through shared conditions."""
    chosen = [e.id for e in net.events] if event_ids is None else list(event_ids)
    chosen_set = set(chosen)
    seen = set()
    out = []
    for start in chosen:
        if start in seen:
            continue
        seen.add(start)
        comp = [start]
        stack = [start]
        while stack:
            e = stack.pop()
            for c in net._pre[e] + net._post[e]:
                for f in net._pre[c] + net._post[c]:
                    if f in chosen_set and f not in seen:
                        seen.add(f)
                        comp.append(f)
                        stack.append(f)
        out.append(comp)
    return out


def complete_closure(net: Net, event_ids: Iterable[str], net_id: Optional[str] = None) -> Net:
    """The complete subnet spanned by ``event_ids``.

    Keeps every condition adjacent to a chosen event and every arc between
    the kept nodes; node ids and annotations are preserved.
    """
    chosen = set(event_ids)
    for e in chosen:
        net.event(e)
    conds = set()
    for e in chosen:
        conds.update(net._pre[e])
        conds.update(net._post[e])
    keep = chosen | conds
    return Net(
        net.id if net_id is None else net_id,
        [c for c in net.conditions if c.id in conds],
        [e for e in net.events if e.id in chosen],
        [a for a in net.arcs if a.source in keep and a.target in keep],
    )


def is_complete_subnet(sub: Net, net: Net) -> bool:
    """Check, by node id, that ``sub`` is a complete subnet of ``net``."""
    for c in sub.conditions:
        if net._cond.get(c.id) != c:
            return False
    for e in sub.events:
        if net._event.get(e.id) != e:
            return False
    keep = set(sub._cond) | set(sub._event)
    expected = {a for a in net.arcs if a.source in keep and a.target in keep}
    if set(sub.arcs) != expected:
        return False
    for e in sub._event:
        for c in net._pre[e] + net._post[e]:
            if c not in sub._cond:
                return False
    return True


# ----------------------------------------------------------------------
# labeled isomorphism (exhaustive; a testing aid)

def _role(net: Net, event_id: str, cond_id: str):
    a = net._arc.get((cond_id, event_id))
    if a is not None:
        return ("in", a.weight, a.inhibitor)
    a = net._arc[(event_id, cond_id)]
    return ("out", a.weight, a.inhibitor)


def _cond_key(c: ConditionNode):
    return (c.label, -1 if c.capacity is None else c.capacity)


def _event_signature(net: Net, e: str):
    items = [(_role(net, e, c), _cond_key(net._cond[c])) for c in net._pre[e] + net._post[e]]
    return (net._event[e].label, tuple(sorted(items)))


def _shared(net: Net, e: str, f: str):
    fc = set(net._pre[f] + net._post[f])
    items = [(_cond_key(net._cond[c]), _role(net, e, c), _role(net, f, c))
             for c in net._pre[e] + net._post[e] if c in fc]
    return tuple(sorted(items))


def labeled_isomorphic(n1: Net, n2: Net, max_events: int = 32) -> bool:
    """True iff a kind-, label-, direction- and annotation-preserving
    bijection exists between the two nets."""
    if len(n1.events) > max_events or len(n2.events) > max_events:
        raise SizeGuardExceeded(f"labeled_isomorphic is limited to {max_events} events")
    if (len(n1.events), len(n1.conditions), len(n1.arcs)) != (len(n2.events), len(n2.conditions), len(n2.arcs)):
        return False
    if Counter(map(_cond_key, n1.conditions)) != Counter(map(_cond_key, n2.conditions)):
        return False
    sig1 = {e.id: _event_signature(n1, e.id) for e in n1.events}
    sig2 = {e.id: _event_signature(n2, e.id) for e in n2.events}
    if Counter(sig1.values()) != Counter(sig2.values()):
        return False

    # order n1's events so that each one (after the first of a component)
    # shares a condition with an earlier one
    order = [e for comp in event_components(n1) for e in comp]
    by_sig = defaultdict(list)
    for e, s in sig2.items():
        by_sig[s].append(e)

    def cond_signature(net, c, mapping):
        return (_cond_key(net._cond[c]),
                frozenset((mapping(e), _role(net, e, c)) for e in net._pre[c] + net._post[c]))

    mapping = {}
    used = set()

    def finish():
        left = Counter(cond_signature(n1, c.id, mapping.__getitem__) for c in n1.conditions)
        right = Counter(cond_signature(n2, c.id, lambda x: x) for c in n2.conditions)
        return left == right

    def extend(i):
        if i == len(order):
            return finish()
        e = order[i]
        for f in by_sig[sig1[e]]:
            if f in used:
                continue
            if any(_shared(n1, e, e2) != _shared(n2, f, mapping[e2]) for e2 in order[:i]):
                continue
            mapping[e] = f
            used.add(f)
            if extend(i + 1):
                return True
            del mapping[e]
            used.discard(f)
        return False

    return extend(0)


# ----------------------------------------------------------------------
# JSON

def net_to_dict(net: Net) -> dict:
    arcs = []
    for a in net.arcs:
        d = {"from": a.source, "to": a.target}
        if a.weight != 1:
            d["weight"] = a.weight
        if a.inhibitor:
            d["inhibitor"] = True
        arcs.append(d)
    out = {
        "id": net.id,
        "conditions": [{"id": c.id, "label": c.label} for c in net.conditions],
        "events": [{"id": e.id, "label": e.label} for e in net.events],
        "arcs": arcs,
    }
    caps = {c.id: c.capacity for c in net.conditions if c.capacity is not None}
    if caps:
        out["capacities"] = caps
    return out


def net_from_dict(data: dict) -> Net:
    try:
        caps = data.get("capacities", {})
        conditions = []
        for c in data["conditions"]:
            cap = caps.get(c["id"])
            if cap == "inf":
                cap = None
            conditions.append(ConditionNode(str(c["id"]), c["label"], cap))
        events = [EventNode(str(e["id"]), e["label"]) for e in data["events"]]
        arcs = [Arc(str(a["from"]), str(a["to"]), a.get("weight", 1), bool(a.get("inhibitor", False)))
                for a in data["arcs"]]
        return Net(str(data["id"]), conditions, events, arcs)
    except (KeyError, TypeError, AttributeError) as exc:
        raise MalformedNet(f"bad net object: {exc!r}") from None
