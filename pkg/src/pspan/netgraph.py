"""Net graphs: one node per event, condition information folded into taggings.

A node's tagging lists every condition adjacent to its event as a signed
entry ('-' input, '+' output, '--' inhibitor input).  An edge joins two
events sharing at least one condition node and carries one triple
``(sign at u, label, sign at v)`` per shared condition.  Edges are stored
once, oriented from ``u``; the other orientation is derived by flipping.

P/T capacities and arc weights ride along in the same entries; default
values (weight 1, unbounded capacity) are not rendered, so unannotated nets
produce exactly the plain grammar.
"""
from __future__ import annotations

import functools
import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import InvalidInhibitor, InvalidTagging, NoEvents, NotPure
from .net import Arc, ConditionNode, EventNode, Net, check_label, is_pure

SIGN_RANK = {"--": 0, "-": 1, "+": 2}
SIGNS = tuple(SIGN_RANK)

_DIGITS = re.compile(r"(\d+)")


@functools.lru_cache(maxsize=None)
def label_key(label: str) -> tuple:
    """Order labels with digit runs compared numerically (c6 < c10); the raw
    string breaks ties such as c6 / c06."""
    chunks = _DIGITS.split(label)
    return (tuple(int(c) if i % 2 else c for i, c in enumerate(chunks)), label)


def cap_key(capacity: Optional[int]) -> tuple:
    return (1, 0) if capacity is None else (0, capacity)


def render_cap(capacity: Optional[int]) -> str:
    return "inf" if capacity is None else str(capacity)


@dataclass(frozen=True)
class SignedCondition:
    sign: str
    label: str
    capacity: Optional[int] = None
    weight: int = 1
    key: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.sign not in SIGN_RANK:
            raise InvalidTagging(f"bad sign {self.sign!r}")
        object.__setattr__(self, "key", (SIGN_RANK[self.sign], label_key(self.label), cap_key(self.capacity), self.weight))

    @property
    def annotated(self) -> bool:
        return self.capacity is not None or self.weight != 1

    def render(self) -> str:
        if self.annotated:
            return f"{self.sign}{self.label}(K{render_cap(self.capacity)},W{self.weight})"
        return f"{self.sign}{self.label}"


@dataclass(frozen=True)
class Triple:
    front: str
    label: str
    rear: str
    capacity: Optional[int] = None
    front_weight: int = 1
    rear_weight: int = 1
    key: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.front not in SIGN_RANK or self.rear not in SIGN_RANK:
            raise InvalidTagging(f"bad sign in triple ({self.front!r}, {self.label!r}, {self.rear!r})")
        object.__setattr__(self, "key", (SIGN_RANK[self.front], label_key(self.label), SIGN_RANK[self.rear],
                                         cap_key(self.capacity), self.front_weight, self.rear_weight))

    def flip(self) -> "Triple":
        return Triple(self.rear, self.label, self.front, self.capacity, self.rear_weight, self.front_weight)

    @property
    def annotated(self) -> bool:
        return self.capacity is not None or self.front_weight != 1 or self.rear_weight != 1

    def render(self) -> str:
        if self.annotated:
            return (f"({self.front}W{self.front_weight},{self.label}(K{render_cap(self.capacity)}),"
                    f"{self.rear}W{self.rear_weight})")
        return f"({self.front},{self.label},{self.rear})"


def sort_tagging(entries):
    return tuple(sorted(entries, key=lambda t: t.key))


def render_node(label: str, tagging) -> str:
    return f"{label}({','.join(s.render() for s in tagging)})"


def render_edge(tagging) -> str:
    return f"({','.join(t.render() for t in tagging)})"


@dataclass(frozen=True)
class NGNode:
    id: str
    label: str
    tagging: tuple = ()
    key: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        check_label(self.label)
        tagging = sort_tagging(self.tagging)
        object.__setattr__(self, "tagging", tagging)
        object.__setattr__(self, "key", (label_key(self.label), tuple(s.key for s in tagging)))

    def render(self) -> str:
        return render_node(self.label, self.tagging)


class NGEdge:
    """Undirected edge between ``u`` and ``v``; ``tagging`` is read from ``u``."""

    __slots__ = ("u", "v", "tagging", "_flipped", "_key_u", "_key_v")

    def __init__(self, u: str, v: str, tagging: Iterable[Triple]):
        self.u = u
        self.v = v
        self.tagging = sort_tagging(tagging)
        self._flipped = sort_tagging(t.flip() for t in self.tagging)
        self._key_u = tuple(t.key for t in self.tagging)
        self._key_v = tuple(t.key for t in self._flipped)

    def other(self, x: str) -> str:
        return self.v if x == self.u else self.u

    def tagging_from(self, x: str) -> tuple:
        if x == self.u:
            return self.tagging
        if x == self.v:
            return self._flipped
        raise KeyError(x)

    def key_from(self, x: str) -> tuple:
        return self._key_u if x == self.u else self._key_v

    def __repr__(self):
        return f"NGEdge({self.u!r}, {self.v!r}, {render_edge(self.tagging)})"


class NetGraph:
    """Immutable net graph ``(V, D, W)``."""

    def __init__(self, graph_id: str, nodes: Iterable[NGNode], edges: Iterable[NGEdge]):
        self.id = graph_id
        self.nodes = tuple(nodes)
        self._node = {}
        for n in self.nodes:
            if n.id in self._node:
                raise InvalidTagging(f"duplicate net graph node {n.id!r}")
            self._node[n.id] = n
        self.adj = {n.id: {} for n in self.nodes}
        edges = tuple(edges)
        for e in edges:
            if e.u not in self._node or e.v not in self._node:
                raise InvalidTagging(f"edge {e.u!r}-{e.v!r} references a missing node")
            if e.u == e.v:
                raise InvalidTagging(f"self-edge at {e.u!r}")
            if e.v in self.adj[e.u]:
                raise InvalidTagging(f"parallel edges between {e.u!r} and {e.v!r}")
            self.adj[e.u][e.v] = e
            self.adj[e.v][e.u] = e
        self.edges = edges

    def node(self, node_id: str) -> NGNode:
        return self._node[node_id]

    def edge(self, u: str, v: str) -> Optional[NGEdge]:
        return self.adj[u].get(v)

    @property
    def condition_universe(self) -> frozenset:
        labels = {s.label for n in self.nodes for s in n.tagging}
        labels.update(t.label for e in self.edges for t in e.tagging)
        return frozenset(labels)

    def components(self) -> list[list[str]]:
        seen = set()
        out = []
        for n in self.nodes:
            if n.id in seen:
                continue
            seen.add(n.id)
            comp = [n.id]
            stack = [n.id]
            while stack:
                x = stack.pop()
                for y in self.adj[x]:
                    if y not in seen:
                        seen.add(y)
                        comp.append(y)
                        stack.append(y)
            out.append(comp)
        return out

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def subgraph(self, node_ids: Iterable[str], graph_id: Optional[str] = None) -> "NetGraph":
        """Induced subgraph on ``node_ids``."""
        keep = set(node_ids)
        return NetGraph(self.id if graph_id is None else graph_id,
                        [n for n in self.nodes if n.id in keep],
                        [e for e in self.edges if e.u in keep and e.v in keep])

    def __repr__(self):
        return f"NetGraph({self.id!r}, {len(self.nodes)} nodes, {len(self.edges)} edges)"


# ----------------------------------------------------------------------
# net -> net graph

def _entry(net: Net, event_id: str, cond_id: str) -> SignedCondition:
    cond = net.condition(cond_id)
    arc = net.arc(cond_id, event_id)
    if arc is not None:
        return SignedCondition("--" if arc.inhibitor else "-", cond.label, cond.capacity, arc.weight)
    arc = net.arc(event_id, cond_id)
    if arc.inhibitor:
        raise InvalidInhibitor(f"inhibitor arc {event_id!r}->{cond_id!r} runs event to condition")
    return SignedCondition("+", cond.label, cond.capacity, arc.weight)


def net_to_netgraph(net: Net) -> NetGraph:
    """Transform a pure net with at least one event into its net graph."""
    if not net.events:
        raise NoEvents(f"net {net.id!r} has no events")
    if not is_pure(net):
        raise NotPure(f"net {net.id!r} has a self-loop")
    entries = {}
    nodes = []
    for e in net.events:
        ent = {c: _entry(net, e.id, c) for c in net.preset(e.id) + net.postset(e.id)}
        entries[e.id] = ent
        nodes.append(NGNode(e.id, e.label, tuple(ent.values())))
    position = {e.id: i for i, e in enumerate(net.events)}
    shared = defaultdict(list)
    for c in net.conditions:
        touching = sorted(net.preset(c.id) + net.postset(c.id), key=position.__getitem__)
        for i, a in enumerate(touching):
            for b in touching[i + 1:]:
                ea, eb = entries[a][c.id], entries[b][c.id]
                shared[(a, b)].append(Triple(ea.sign, c.label, eb.sign, c.capacity, ea.weight, eb.weight))
    edges = [NGEdge(a, b, triples) for (a, b), triples in
             sorted(shared.items(), key=lambda kv: (position[kv[0][0]], position[kv[0][1]]))]
    return NetGraph(net.id, nodes, edges)


# ----------------------------------------------------------------------
# c-complexes and the back transform

def _label_edges(ng: NetGraph, label: str) -> list:
    return [e for e in ng.edges if any(t.label == label for t in e.tagging)]


def _group_complexes(edges: list) -> list[list[NGEdge]]:
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        ru, rv = find(e.u), find(e.v)
        if ru != rv:
            parent[ru] = rv
    groups = defaultdict(list)
    for e in edges:
        groups[find(e.u)].append(e)
    return list(groups.values())


def c_complexes(ng: NetGraph, label: str) -> list[frozenset]:
    """Maximal connected sets of edges whose tagging mentions ``label``.

    Each complex is a frozenset of ``(u, v)`` endpoint pairs.
    """
    return [frozenset((e.u, e.v) for e in group)
            for group in _group_complexes(_label_edges(ng, label))]


def _complex_ports(group: list, label: str) -> dict:
    """Per node: the set of (sign, capacity, weight) seen for ``label``."""
    ports = defaultdict(set)
    for e in group:
        for t in e.tagging:
            if t.label == label:
                ports[e.u].add((t.front, t.capacity, t.front_weight))
                ports[e.v].add((t.rear, t.capacity, t.rear_weight))
    return ports


def netgraph_to_net(ng: NetGraph, net_id: Optional[str] = None) -> Net:
    """Rebuild the pure net a net graph encodes."""
    violations = [v for v in validate_netgraph(ng) if v.rule != "UnsortedTagging"]
    if violations:
        raise InvalidTagging("; ".join(str(v) for v in violations))

    # (node, entry key) -> list of complex ids still waiting to be attached
    pending = defaultdict(list)
    complex_ports = []
    for label in sorted(ng.condition_universe, key=label_key):
        for group in _group_complexes(_label_edges(ng, label)):
            ports = _complex_ports(group, label)
            cid = len(complex_ports)
            resolved = {}
            for node, seen in ports.items():
                (sign, cap, weight), = seen
                resolved[node] = (sign, cap, weight)
                pending[(node, SignedCondition(sign, label, cap, weight).key)].append(cid)
            complex_ports.append((label, resolved))

    conditions, arcs = [], []
    created = {}

    def attach(cond_id, event_id, sign, weight):
        if sign == "+":
            arcs.append(Arc(event_id, cond_id, weight))
        else:
            arcs.append(Arc(cond_id, event_id, weight, sign == "--"))

    for node in ng.nodes:
        for s in node.tagging:
            waiting = pending.get((node.id, s.key))
            if waiting:
                cid = waiting.pop(0)
                if cid not in created:
                    label, resolved = complex_ports[cid]
                    cond_id = f"c{len(conditions)}"
                    created[cid] = cond_id
                    cap = next(iter(resolved.values()))[1]
                    conditions.append(ConditionNode(cond_id, label, cap))
                    for ev, (sign, _, weight) in resolved.items():
                        attach(cond_id, ev, sign, weight)
                continue
            cond_id = f"c{len(conditions)}"
            conditions.append(ConditionNode(cond_id, s.label, s.capacity))
            attach(cond_id, node.id, s.sign, s.weight)
    events = [EventNode(n.id, n.label) for n in ng.nodes]
    return Net(ng.id if net_id is None else net_id, conditions, events, arcs)


# ----------------------------------------------------------------------
# validation

@dataclass(frozen=True)
class Violation:
    rule: str
    where: str
    label: Optional[str] = None

    def __str__(self):
        extra = f" label={self.label!r}" if self.label is not None else ""
        return f"{self.rule} at {self.where}{extra}"


def validate_netgraph(ng: NetGraph) -> list[Violation]:
    """Check the tagging rules; an empty list means the graph is valid."""
    out = []
    for n in ng.nodes:
        if tuple(sorted(n.tagging, key=lambda s: s.key)) != n.tagging:
            out.append(Violation("UnsortedTagging", f"node {n.id}"))
    for e in ng.edges:
        where = f"edge {e.u}-{e.v}"
        if not e.tagging:
            out.append(Violation("EmptyEdgeTagging", where))
        counts = Counter(t.label for t in e.tagging)
        for label, k in sorted(counts.items()):
            if k > 1:
                out.append(Violation("DuplicateEdgeLabel", where, label))
    for label in sorted(ng.condition_universe, key=label_key):
        for group in _group_complexes(_label_edges(ng, label)):
            ports = _complex_ports(group, label)
            caps = {cap for seen in ports.values() for _, cap, _ in seen}
            if len(caps) > 1:
                out.append(Violation("CapacityConflict", f"complex at {sorted(ports)[0]}", label))
            for node, seen in sorted(ports.items()):
                if len(seen) > 1:
                    out.append(Violation("SignConflict", f"node {node}", label))
    # every condition an edge records must be listed in both endpoint taggings
    for n in ng.nodes:
        have = Counter(s.key for s in n.tagging)
        need = Counter()
        for label in {t.label for e in ng.adj[n.id].values() for t in e.tagging}:
            incident = [e for e in ng.adj[n.id].values() if any(t.label == label for t in e.tagging)]
            for group in _group_complexes(incident):
                seen = _complex_ports(group, label).get(n.id, set())
                if len(seen) == 1:
                    (sign, cap, weight), = seen
                    need[SignedCondition(sign, label, cap, weight).key] += 1
        missing = need - have
        for key in sorted(missing):
            out.append(Violation("EdgeNotInNodeTagging", f"node {n.id}", key[1]))
    return out


# ----------------------------------------------------------------------
# parsing the tagging grammar

def split_top(s: str) -> list[str]:
    """Split on commas that are not nested inside parentheses."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise InvalidTagging(f"unbalanced parentheses in {s!r}")
        elif ch == "," and depth == 0:
            parts.append(s[start:i])
            start = i + 1
    if depth != 0:
        raise InvalidTagging(f"unbalanced parentheses in {s!r}")
    parts.append(s[start:])
    return parts


def _strip_sign(s: str) -> tuple[str, str]:
    for sign in SIGNS:  # '--' first
        if s.startswith(sign):
            return sign, s[len(sign):]
    raise InvalidTagging(f"missing sign in {s!r}")


def _parse_cap(s: str) -> Optional[int]:
    if not s.startswith("K"):
        raise InvalidTagging(f"bad capacity {s!r}")
    body = s[1:]
    if body == "inf":
        return None
    if not body.isdigit():
        raise InvalidTagging(f"bad capacity {s!r}")
    return int(body)


def _parse_weight(s: str) -> int:
    if not s.startswith("W") or not s[1:].isdigit():
        raise InvalidTagging(f"bad weight {s!r}")
    return int(s[1:])


def parse_signed_condition(s: str) -> SignedCondition:
    sign, rest = _strip_sign(s.strip())
    if rest.endswith(")") and "(" in rest:
        label, inner = rest[:-1].split("(", 1)
        cap, weight = split_top(inner)
        return SignedCondition(sign, check_label(label), _parse_cap(cap), _parse_weight(weight))
    return SignedCondition(sign, check_label(rest))


def parse_node_rendering(s: str) -> tuple[str, tuple]:
    """``"v1(-c1,+c2)"`` -> ``("v1", (SignedCondition, ...))``."""
    s = s.strip()
    if not s.endswith(")") or "(" not in s:
        raise InvalidTagging(f"bad node rendering {s!r}")
    label, inner = s[:-1].split("(", 1)
    tagging = () if not inner.strip() else tuple(parse_signed_condition(p) for p in split_top(inner))
    return check_label(label), tagging


def parse_triple(s: str) -> Triple:
    s = s.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise InvalidTagging(f"bad triple {s!r}")
    parts = split_top(s[1:-1])
    if len(parts) != 3:
        raise InvalidTagging(f"bad triple {s!r}")
    fs, lab, rs = (p.strip() for p in parts)
    front, fw = _strip_sign(fs)
    rear, rw = _strip_sign(rs)
    if lab.endswith(")") and "(" in lab:
        label, cap = lab[:-1].split("(", 1)
        return Triple(front, check_label(label), rear, _parse_cap(cap), _parse_weight(fw), _parse_weight(rw))
    if fw or rw:
        raise InvalidTagging(f"bad triple {s!r}")
    return Triple(front, check_label(lab), rear)


def parse_edge_rendering(s: str) -> tuple:
    """``"((-,c9,-),(+,c6,+))"`` -> tuple of Triple."""
    s = s.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise InvalidTagging(f"bad edge rendering {s!r}")
    inner = s[1:-1].strip()
    if not inner:
        return ()
    return tuple(parse_triple(p) for p in split_top(inner))


# ----------------------------------------------------------------------
# JSON

def netgraph_to_dict(ng: NetGraph) -> dict:
    return {
        "id": ng.id,
        "nodes": [{"id": n.id, "label": n.label, "tagging": n.render()} for n in ng.nodes],
        "edges": [{"u": e.u, "v": e.v, "tagging_from_u": render_edge(e.tagging)} for e in ng.edges],
    }


def netgraph_from_dict(data: dict) -> NetGraph:
    nodes = []
    for n in data["nodes"]:
        label, tagging = parse_node_rendering(n["tagging"])
        if label != n["label"]:
            raise InvalidTagging(f"node {n['id']!r}: label {n['label']!r} disagrees with tagging {n['tagging']!r}")
        nodes.append(NGNode(str(n["id"]), label, tagging))
    edges = [NGEdge(str(e["u"]), str(e["v"]), parse_edge_rendering(e["tagging_from_u"])) for e in data["edges"]]
    return NetGraph(str(data["id"]), nodes, edges)
