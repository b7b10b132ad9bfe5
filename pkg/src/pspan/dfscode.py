"""DFS codes of net graphs and the minimal (canonical) code.

Traversal rules.  From the current node, untraversed backward edges (to
already numbered nodes) are taken before forward edges; taking any edge
makes its far end the current node.  When the current node has nothing
left, the walk returns to the node it came from.  Among the admissible
edges the one with the smallest unit key wins; a unit key orders by front
traversal order, then the rendered front node, edge tagging and rear node,
and only then by the rear traversal order.  Exact ties are explored
exhaustively, so the result is the minimum over every admissible walk.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import Disconnected, MalformedCode, NoEdges, SizeGuardExceeded
from .netgraph import (NetGraph, NGEdge, NGNode, label_key, parse_edge_rendering,
                       parse_node_rendering, render_edge, render_node, split_top)


@dataclass(frozen=True)
class NodeRendering:
    label: str
    tagging: tuple = ()
    key: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "key", (label_key(self.label), tuple(s.key for s in self.tagging)))

    @classmethod
    def of(cls, node: NGNode) -> "NodeRendering":
        return cls(node.label, node.tagging)

    def render(self) -> str:
        return render_node(self.label, self.tagging)


@dataclass(frozen=True)
class DfsCodeUnit:
    front_order: int
    rear_order: int
    front: NodeRendering
    edge: tuple
    rear: NodeRendering
    graph_id: Optional[str] = None
    key: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "key", (self.front_order, self.front.key, tuple(t.key for t in self.edge),
                                         self.rear.key, self.rear_order))

    @property
    def is_forward(self) -> bool:
        return self.rear_order > self.front_order

    @property
    def identification(self) -> "EdgeIdentification":
        return EdgeIdentification.canonical(self.front, self.edge, self.rear)

    def without_graph_id(self) -> "DfsCodeUnit":
        return DfsCodeUnit(self.front_order, self.rear_order, self.front, self.edge, self.rear)

    def render(self, with_graph_id: bool = True) -> str:
        body = f"{self.front_order},{self.rear_order},{self.front.render()},{render_edge(self.edge)},{self.rear.render()}"
        if with_graph_id and self.graph_id is not None:
            body += f",{self.graph_id}"
        return f"({body})"

    def __str__(self):
        return self.render()


def compare_units(a: DfsCodeUnit, b: DfsCodeUnit) -> int:
    """-1, 0 or 1; the graph id never takes part."""
    return (a.key > b.key) - (a.key < b.key)


@functools.total_ordering
class DfsCode:
    """A sequence of code units; codes compare unit by unit, a proper
    prefix being smaller."""

    __slots__ = ("units", "key")

    def __init__(self, units: Iterable[DfsCodeUnit]):
        self.units = tuple(units)
        self.key = tuple(u.key for u in self.units)

    def __len__(self):
        return len(self.units)

    def __iter__(self):
        return iter(self.units)

    def __getitem__(self, i):
        return self.units[i]

    def __eq__(self, other):
        if not isinstance(other, DfsCode):
            return NotImplemented
        return self.key == other.key

    def __lt__(self, other):
        return self.key < other.key

    def __hash__(self):
        return hash(self.key)

    def without_graph_id(self) -> "DfsCode":
        return DfsCode(u.without_graph_id() for u in self.units)

    def render(self, with_graph_id: bool = True) -> list[str]:
        return [u.render(with_graph_id) for u in self.units]

    def __str__(self):
        return ",".join(self.render())

    def __repr__(self):
        return f"DfsCode({self!s})"


def compare_codes(a: DfsCode, b: DfsCode) -> int:
    return (a.key > b.key) - (a.key < b.key)


@dataclass(frozen=True)
class EdgeIdentification:
    """Segments 3-5 of a unit, read in whichever direction sorts first."""

    front: NodeRendering
    edge: tuple
    rear: NodeRendering
    key: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "key", (self.front.key, tuple(t.key for t in self.edge), self.rear.key))

    @classmethod
    def canonical(cls, front: NodeRendering, edge: tuple, rear: NodeRendering) -> "EdgeIdentification":
        fwd = cls(front, edge, rear)
        back = cls(rear, tuple(sorted((t.flip() for t in edge), key=lambda t: t.key)), front)
        return fwd if fwd.key <= back.key else back

    def __hash__(self):
        return hash(self.key)

    def __eq__(self, other):
        return isinstance(other, EdgeIdentification) and self.key == other.key

    def __lt__(self, other):
        return self.key < other.key

    def render(self) -> str:
        return f"{self.front.render()},{render_edge(self.edge)},{self.rear.render()}"


def edge_identification(u: NGNode, v: NGNode, edge: NGEdge) -> EdgeIdentification:
    return EdgeIdentification.canonical(NodeRendering.of(u), edge.tagging_from(u.id), NodeRendering.of(v))


def identification_key(ng: NetGraph, edge: NGEdge) -> tuple:
    """Hashable canonical identification key of an edge (fast path)."""
    ku, kv = ng.node(edge.u).key, ng.node(edge.v).key
    a = (ku, edge.key_from(edge.u), kv)
    b = (kv, edge.key_from(edge.v), ku)
    return a if a <= b else b


# ----------------------------------------------------------------------
# traversal machine

class _Walk:
    __slots__ = ("nodes", "order", "done", "current", "stack")

    def __init__(self, start):
        self.nodes = [start]          # order -> node id
        self.order = {start: 0}       # node id -> order
        self.done = set()             # ids of traversed edges
        self.current = start
        self.stack = []

    def copy(self):
        w = _Walk.__new__(_Walk)
        w.nodes = self.nodes[:]
        w.order = dict(self.order)
        w.done = set(self.done)
        w.current = self.current
        w.stack = self.stack[:]
        return w

    def settle(self, ng: NetGraph) -> bool:
        """Backtrack until the current node has an untraversed edge."""
        while True:
            adj = ng.adj[self.current]
            if any(id(e) not in self.done for e in adj.values()):
                return True
            if not self.stack:
                return False
            self.current = self.stack.pop()

    def candidates(self, ng: NetGraph, keys: dict):
        u = self.current
        ou = self.order[u]
        back, fwd = [], []
        for v, e in ng.adj[u].items():
            if id(e) in self.done:
                continue
            if v in self.order:
                back.append((v, e))
            else:
                fwd.append((v, e))
        chosen = back or fwd
        nxt = len(self.nodes)
        out = []
        for v, e in chosen:
            ov = self.order.get(v, nxt)
            out.append(((ou, keys[u], e.key_from(u), keys[v], ov), v, e))
        return out

    def take(self, v, e):
        self.done.add(id(e))
        if v not in self.order:
            self.order[v] = len(self.nodes)
            self.nodes.append(v)
        self.stack.append(self.current)
        self.current = v


def _unit(ng: NetGraph, walk: _Walk, v: str, e: NGEdge, graph_id) -> DfsCodeUnit:
    u = walk.current
    ov = walk.order.get(v, len(walk.nodes))
    return DfsCodeUnit(walk.order[u], ov, NodeRendering.of(ng.node(u)), e.tagging_from(u),
                       NodeRendering.of(ng.node(v)), graph_id)


def _check_traversable(ng: NetGraph):
    if not ng.edges:
        raise NoEdges(f"net graph {ng.id!r} has no edges")
    if not ng.is_connected():
        raise Disconnected(f"net graph {ng.id!r} is not connected")


def canonical_traversal(ng: NetGraph, graph_id=None) -> tuple[DfsCode, list]:
    """Minimal code plus the node id at each traversal order."""
    _check_traversable(ng)
    keys = {n.id: n.key for n in ng.nodes}
    walks = [_Walk(n.id) for n in ng.nodes if ng.adj[n.id]]
    units = []
    for _ in range(len(ng.edges)):
        best = None
        picks = []
        for w in walks:
            w.settle(ng)
            for key, v, e in w.candidates(ng, keys):
                if best is None or key < best:
                    best = key
                    picks = [(w, v, e)]
                elif key == best:
                    picks.append((w, v, e))
        units.append(_unit(ng, picks[0][0], picks[0][1], picks[0][2], graph_id))
        walks = []
        seen = set()
        last = {id(w): i for i, (w, _, _) in enumerate(picks)}
        for i, (w, v, e) in enumerate(picks):
            # the final pick of a walk may reuse it; earlier ones need copies
            nw = w if last[id(w)] == i else w.copy()
            nw.take(v, e)
            sig = (tuple(nw.nodes), nw.current, tuple(nw.stack))
            if sig in seen:
                continue
            seen.add(sig)
            walks.append(nw)
    return DfsCode(units), walks[0].nodes


def minimal_dfs_code(ng: NetGraph, graph_id=None) -> DfsCode:
    """The smallest DFS code of a connected net graph with at least one edge."""
    return canonical_traversal(ng, graph_id)[0]


def enumerate_dfs_codes(ng: NetGraph, max_nodes: int = 8, graph_id=None) -> set:
    """Every code produced by some admissible walk (brute force).

    One shared walk state is advanced and undone in place, and code units
    are built once per (front order, front, edge, rear, rear order) choice.
    """
    if len(ng.nodes) > max_nodes:
        raise SizeGuardExceeded(f"enumeration is limited to {max_nodes} nodes")
    _check_traversable(ng)
    renderings = {n.id: NodeRendering.of(n) for n in ng.nodes}
    total = len(ng.edges)
    out = set()
    unit_cache = {}
    order = {}
    nodes = []
    done = set()
    stack = []
    units = []

    def unit(ou, u, e, v, ov):
        key = (ou, ov, u, v, id(e))
        cached = unit_cache.get(key)
        if cached is None:
            cached = unit_cache[key] = DfsCodeUnit(ou, ov, renderings[u], e.tagging_from(u),
                                                   renderings[v], graph_id)
        return cached

    def rec(current):
        if len(units) == total:
            out.add(DfsCode(units))
            return
        # backtrack to the nearest node with an untraversed edge
        trail = []
        while all(id(e) in done for e in ng.adj[current].values()):
            trail.append(current)
            current = stack.pop()
        back, fwd = [], []
        for v, e in ng.adj[current].items():
            if id(e) not in done:
                (back if v in order else fwd).append((v, e))
        ou = order[current]
        for v, e in back or fwd:
            new = v not in order
            if new:
                order[v] = len(nodes)
                nodes.append(v)
            units.append(unit(ou, current, e, v, order[v]))
            done.add(id(e))
            stack.append(current)
            rec(v)
            stack.pop()
            done.discard(id(e))
            units.pop()
            if new:
                del order[v]
                nodes.pop()
        for prev in reversed(trail):
            stack.append(current)
            current = prev

    for n in ng.nodes:
        order[n.id] = 0
        nodes.append(n.id)
        rec(n.id)
        nodes.pop()
        del order[n.id]
    return out


# ----------------------------------------------------------------------
# canonical forms of arbitrary (possibly edgeless / disconnected) graphs

def node_pattern_rendering(node: NGNode) -> str:
    return node.render()


def canonical_form(ng: NetGraph) -> tuple:
    """Hashable canonical key of any net graph: one entry per component,
    components sorted."""
    parts = []
    for comp in ng.components():
        sub = ng.subgraph(comp)
        if not sub.edges:
            parts.append((0, sub.nodes[0].key))
        else:
            parts.append((1, minimal_dfs_code(sub).key))
    return tuple(sorted(parts))


# ----------------------------------------------------------------------
# code -> net graph

def code_to_netgraph(code, graph_id: Optional[str] = None) -> NetGraph:
    """Rebuild the net graph a code describes; nodes are named by order."""
    units = list(code)
    if not units:
        raise MalformedCode("empty code")
    renderings = {}
    edges = {}
    count = 0
    for i, u in enumerate(units):
        if i == 0:
            if (u.front_order, u.rear_order) != (0, 1):
                raise MalformedCode("first unit must be (0,1,...)")
            count = 1
        if u.front_order >= count or u.front_order < 0:
            raise MalformedCode(f"unit {i} starts from unnumbered node {u.front_order}")
        if u.rear_order == count:
            count += 1
        elif not (0 <= u.rear_order < count) or u.rear_order == u.front_order:
            raise MalformedCode(f"unit {i} has invalid rear order {u.rear_order}")
        for order, r in ((u.front_order, u.front), (u.rear_order, u.rear)):
            prev = renderings.setdefault(order, r)
            if prev.key != r.key:
                raise MalformedCode(f"node {order} rendered inconsistently")
        pair = frozenset((u.front_order, u.rear_order))
        if pair in edges:
            raise MalformedCode(f"edge {sorted(pair)} appears twice")
        if not u.edge:
            raise MalformedCode(f"unit {i} has an empty edge tagging")
        edges[pair] = NGEdge(str(u.front_order), str(u.rear_order), u.edge)
    if graph_id is None:
        graph_id = units[0].graph_id if units[0].graph_id is not None else "pattern"
    nodes = [NGNode(str(k), renderings[k].label, renderings[k].tagging) for k in range(count)]
    return NetGraph(graph_id, nodes, edges.values())


def parse_unit(s: str) -> DfsCodeUnit:
    s = s.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise MalformedCode(f"bad unit {s!r}")
    try:
        parts = split_top(s[1:-1])
        if len(parts) < 5:
            raise MalformedCode(f"bad unit {s!r}")
        i, j = int(parts[0]), int(parts[1])
        fl, ft = parse_node_rendering(parts[2])
        edge = parse_edge_rendering(parts[3])
        rl, rt = parse_node_rendering(parts[4])
    except MalformedCode:
        raise
    except Exception as exc:
        raise MalformedCode(f"bad unit {s!r}: {exc}") from None
    gid = ",".join(parts[5:]) if len(parts) > 5 else None
    return DfsCodeUnit(i, j, NodeRendering(fl, ft), edge, NodeRendering(rl, rt), gid)


def parse_code(units: Iterable[str]) -> DfsCode:
    return DfsCode(parse_unit(u) for u in units)
