"""Frequent complete-subnet mining over net graphs.

A complete subnet over a set of events is exactly the induced sub-net-graph
on those events, so patterns are connected *induced* subgraphs and grow one
node at a time (the new node brings every edge it has into the pattern).

Pipeline:

1. ``build_and_filter`` traverses every input graph with its minimal DFS
   code, counts in how many distinct graphs each (direction-canonical) edge
   identification and each tagged node occurs, and drops infrequent ones.
2. Every frequent node is a one-event pattern (bucket 0).  Every frequent
   edge identification seeds a search.
3. The inputs are cut down to the connected components of their frequent
   part, and isomorphic components are pooled (see ``_Pool``), so repeated
   structure is embedded once rather than once per input graph.
4. ``grow`` extends a pattern by one neighbouring node using the live
   embeddings, merges children by canonical code, and keeps those reaching
   ``minsup`` distinct graphs.

Each pattern with edges is owned by its smallest edge identification, and
a seed only keeps children it owns.  Seeds are therefore independent and
can be mined in parallel without sharing a visited set.
"""
from __future__ import annotations

import os
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .dfscode import (DfsCode, DfsCodeUnit, NodeRendering, canonical_traversal, code_to_netgraph,
                      identification_key, minimal_dfs_code, parse_code)
from .errors import EmptyInput
from .net import Net, net_to_dict
from .netgraph import (NetGraph, NGEdge, NGNode, netgraph_to_net, parse_node_rendering)

DEFAULT_MAX_EMBEDDINGS = 2_000_000


# ----------------------------------------------------------------------
# filtered code-unit pool

@dataclass
class Fdfs:
    """Code units per graph plus the distinct-graph support of every edge
    identification (after filtering, only frequent ones remain)."""

    units: dict                     # graph id -> list of DfsCodeUnit
    support: dict                   # identification key -> frozenset of graph ids
    identifications: dict           # identification key -> EdgeIdentification

    def is_frequent(self, key) -> bool:
        return key in self.support


@dataclass
class Snng:
    """Tagged nodes and the graphs they occur in."""

    support: dict                   # node key -> frozenset of graph ids
    renderings: dict                # node key -> NodeRendering


def build_and_filter(ngs: Sequence[NetGraph], minsup: int) -> tuple[Fdfs, list, Snng]:
    """Traverse every graph, count distinct-graph support, drop infrequent
    units and nodes.  Returns ``(fdfs, min_fdfs, snng)``."""
    if not ngs:
        raise EmptyInput("no net graphs to mine")
    if minsup < 1:
        raise ValueError("minsup must be at least 1")
    units = {}
    edge_graphs = defaultdict(set)
    idents = {}
    node_graphs = defaultdict(set)
    renderings = {}
    for ng in ngs:
        collected = []
        for node in ng.nodes:
            node_graphs[node.key].add(ng.id)
            renderings.setdefault(node.key, NodeRendering.of(node))
        for comp in ng.components():
            if len(comp) < 2:
                continue
            sub = ng.subgraph(comp) if len(comp) < len(ng.nodes) else ng
            collected.extend(minimal_dfs_code(sub, ng.id))
        units[ng.id] = collected
        for u in collected:
            ident = u.identification
            edge_graphs[ident.key].add(ng.id)
            idents.setdefault(ident.key, ident)
    # sort by (identification, graph id) and keep the frequent ones
    support = {k: frozenset(g) for k, g in edge_graphs.items() if len(g) >= minsup}
    kept = {gid: [u for u in us if u.identification.key in support] for gid, us in units.items()}
    fdfs = Fdfs(kept, support, {k: idents[k] for k in support})
    min_fdfs = sorted((u for us in kept.values() for u in us if u.is_forward), key=lambda u: u.key)
    snng = Snng({k: frozenset(g) for k, g in node_graphs.items() if len(g) >= minsup},
                {k: r for k, r in renderings.items() if len(node_graphs[k]) >= minsup})
    return fdfs, min_fdfs, snng


# ----------------------------------------------------------------------
# patterns and results

@dataclass
class Pattern:
    code: Optional[DfsCode]         # None for single-node patterns
    node: Optional[NodeRendering]   # set for single-node patterns
    support: int
    supporters: tuple
    events: int
    embeddings: Optional[dict] = field(default=None, repr=False, compare=False)
    graph: Optional[NetGraph] = field(default=None, repr=False, compare=False)
    units: tuple = field(default=(), repr=False, compare=False)   # pooled representatives (mining only)

    @property
    def edges(self) -> int:
        return 0 if self.code is None else len(self.code)

    @property
    def sort_key(self) -> tuple:
        return (self.edges, self.node.key if self.code is None else self.code.key)

    def code_strings(self) -> list[str]:
        if self.code is None:
            return [self.node.render()]
        return self.code.render(with_graph_id=False)

    def netgraph(self) -> NetGraph:
        if self.code is None:
            return NetGraph("pattern", [NGNode("0", self.node.label, self.node.tagging)], [])
        return code_to_netgraph(self.code, "pattern")


@dataclass
class MiningResult:
    fd: list                        # fd[j]: patterns with j edges
    minsup: int
    inputs: int

    def patterns(self) -> list[Pattern]:
        return [p for bucket in self.fd for p in bucket]

    def to_dict(self, with_nets: bool = True) -> dict:
        out = []
        for i, p in enumerate(self.patterns()):
            entry = {"edges": p.edges, "code": p.code_strings(), "support": p.support,
                     "supporters": list(p.supporters)}
            if with_nets:
                entry["net"] = net_to_dict(pattern_to_net(p, f"p{i}"))
            out.append(entry)
        return {"minsup": self.minsup, "inputs": self.inputs, "patterns": out}

    @classmethod
    def from_dict(cls, data: dict) -> "MiningResult":
        patterns = []
        for entry in data["patterns"]:
            supporters = tuple(entry["supporters"])
            if entry["edges"] == 0:
                label, tagging = parse_node_rendering(entry["code"][0])
                patterns.append(Pattern(None, NodeRendering(label, tagging), entry["support"], supporters, 1))
            else:
                code = parse_code(entry["code"])
                events = 1 + sum(1 for u in code if u.is_forward)
                patterns.append(Pattern(code, None, entry["support"], supporters, events))
        return cls(_bucket(patterns), data["minsup"], data["inputs"])


def _bucket(patterns: Iterable[Pattern]) -> list:
    patterns = sorted(patterns, key=lambda p: p.sort_key)
    fd = [[] for _ in range(1 + max((p.edges for p in patterns), default=0))]
    for p in patterns:
        fd[p.edges].append(p)
    while len(fd) > 1 and not fd[-1]:
        fd.pop()
    return fd


# ----------------------------------------------------------------------
# embeddings

def find_induced_embeddings(pattern: NetGraph, graph: NetGraph) -> list[tuple]:
    """All induced embeddings of ``pattern`` (nodes named ``"0".."k-1"`` in
    DFS order) in ``graph``, one per image set."""
    k = len(pattern.nodes)
    pnodes = [pattern.node(str(i)) for i in range(k)]
    parent = [None] * k
    for i in range(1, k):
        parent[i] = min(int(j) for j in pattern.adj[str(i)] if int(j) < i)
    found = {}
    image = []

    def extend(i):
        if i == k:
            found.setdefault(frozenset(image), tuple(image))
            return
        if i == 0:
            candidates = [n.id for n in graph.nodes]
        else:
            candidates = list(graph.adj[image[parent[i]]])
        for w in candidates:
            if w in image or graph.node(w).key != pnodes[i].key:
                continue
            ok = True
            for j in range(i):
                pe = pattern.adj[str(j)].get(str(i))
                ge = graph.adj[image[j]].get(w)
                if (pe is None) != (ge is None):
                    ok = False
                    break
                if pe is not None and pe.key_from(str(j)) != ge.key_from(image[j]):
                    ok = False
                    break
            if ok:
                image.append(w)
                extend(i + 1)
                image.pop()

    extend(0)
    return list(found.values())


# ----------------------------------------------------------------------
# growth

class _Pool:
    """Inputs reduced to the parts a frequent pattern can occupy.

    A pattern only uses frequent tagged nodes joined by frequent edges, so
    every embedding lies inside one connected component of that frequent
    part of some input graph.  Isomorphic components (same canonical code)
    are pooled into one representative that remembers which input graphs
    contain it.  Embeddings are then tracked per representative, and the
    support of a pattern is the number of distinct input graphs over the
    representatives it embeds in.  A component holding two frequent nodes
    joined by an infrequent edge is kept on its own, unpooled.
    """

    def __init__(self, graphs: dict, fdfs: Fdfs, snng: Snng):
        self.graphs = {}                # representative id -> NetGraph
        by_code = {}
        members = {}
        for gid, g in graphs.items():
            frequent = {n.id for n in g.nodes if n.key in snng.support}
            allowed = {x: [w for w, e in g.adj[x].items()
                           if w in frequent and identification_key(g, e) in fdfs.support]
                       for x in frequent}
            seen = set()
            for n in g.nodes:
                if n.id not in frequent or n.id in seen or not allowed[n.id]:
                    continue
                comp, stack = [], [n.id]
                seen.add(n.id)
                while stack:
                    x = stack.pop()
                    comp.append(x)
                    for w in allowed[x]:
                        if w not in seen:
                            seen.add(w)
                            stack.append(w)
                sub = g.subgraph(comp)
                if any(identification_key(sub, e) not in fdfs.support for e in sub.edges):
                    key = ("own", gid, n.id)
                else:
                    key = canonical_traversal(sub)[0].key
                uid = by_code.get(key)
                if uid is None:
                    uid = by_code[key] = f"u{len(by_code)}"
                    self.graphs[uid] = g.subgraph(comp, uid)
                    members[uid] = set()
                members[uid].add(gid)
        self.members = {uid: frozenset(m) for uid, m in members.items()}

    def supporters(self, uids) -> set:
        out = set()
        for uid in uids:
            out |= self.members[uid]
        return out


class _Index:
    """Integer-interned view of the pooled representatives.

    ``near[uid][x]`` lists ``(w, rank, edge_id)`` for every neighbour ``w``
    of ``x``; ``rank`` is the position of the edge's identification among
    frequent identifications (-1 if the edge is infrequent) and ``edge_id``
    interns the edge tagging read from ``x``.
    """

    def __init__(self, graphs: dict, fdfs: Fdfs, snng: Snng):
        self.pool = _Pool(graphs, fdfs, snng)
        self.ranks = {key: r for r, key in enumerate(sorted(fdfs.support))}
        self.node_ids = {key: i for i, key in enumerate(sorted(snng.support))}
        edge_ids = {}
        self.near = {}
        self.holders = defaultdict(list)    # identification key -> representatives holding it
        for uid, g in self.pool.graphs.items():
            table = {}
            for x in g.adj:
                row = []
                for w, e in g.adj[x].items():
                    rank = self.ranks.get(identification_key(g, e), -1)
                    ekey = e.key_from(x)
                    row.append((w, rank, edge_ids.setdefault(ekey, len(edge_ids))))
                table[x] = tuple(row)
            self.near[uid] = table
            for key in {identification_key(g, e) for e in g.edges}:
                if key in self.ranks:
                    self.holders[key].append(uid)
        self.node_of = {uid: {n.id: self.node_ids[n.key] for n in g.nodes}
                        for uid, g in self.pool.graphs.items()}


class _Search:
    """Depth-first pattern growth from one seed.

    Embeddings are keyed by pooled representative, not by input graph.
    """

    def __init__(self, graphs: dict, fdfs: Fdfs, snng: Snng, minsup: int,
                 max_events: Optional[int], max_embeddings: int, index: Optional[_Index] = None):
        self.fdfs = fdfs
        self.minsup = minsup
        self.max_events = max_events
        self.max_embeddings = max_embeddings
        self.index = index if index is not None else _Index(graphs, fdfs, snng)
        self.graphs = self.index.pool.graphs
        self.seen = set()
        self.out = []

    def embeddings_of(self, p: Pattern) -> dict:
        if p.embeddings is not None:
            return p.embeddings
        return {uid: find_induced_embeddings(p.graph, self.graphs[uid]) for uid in p.units}

    def run(self, seed_key) -> list[Pattern]:
        ident = self.fdfs.identifications[seed_key]
        unit = DfsCodeUnit(0, 1, ident.front, ident.edge, ident.rear)
        code = DfsCode([unit])
        graph = NetGraph("pattern", [NGNode("0", ident.front.label, ident.front.tagging),
                                     NGNode("1", ident.rear.label, ident.rear.tagging)],
                         [NGEdge("0", "1", ident.edge)])
        embeddings = {}
        for uid in self.index.holders[seed_key]:
            g = self.graphs[uid]
            found = {}
            for e in g.edges:
                for a, b in ((e.u, e.v), (e.v, e.u)):
                    if (g.node(a).key, e.key_from(a), g.node(b).key) == seed_key:
                        found.setdefault(frozenset((a, b)), (a, b))
            if found:
                embeddings[uid] = list(found.values())
        supporters = tuple(sorted(self.index.pool.supporters(embeddings)))
        seed = Pattern(code, None, len(supporters), supporters, 2, embeddings, graph, tuple(embeddings))
        self.seen.add(code.key)
        self.out.append(seed)
        self.grow(seed, self.index.ranks[seed_key])
        return self.out

    def grow(self, p: Pattern, owner: int) -> None:
        if self.max_events is not None and p.events >= self.max_events:
            return
        children = grow(p, self, owner)
        for child in children:
            self.out.append(child)
            self.grow(child, owner)
            child.embeddings = None     # release memory once the subtree is done


def grow(p: Pattern, search: _Search, owner: int) -> list[Pattern]:
    """Children of ``p``: one more node, all its edges into ``p``; kept when
    frequent, owned by ``owner`` (an identification rank) and not seen
    before."""
    graphs, index = search.graphs, search.index
    pool = index.pool
    k = p.events
    # signature -> representative id -> list of extended embeddings
    groups = defaultdict(lambda: defaultdict(list))
    invariant_of = {}
    for uid, embs in search.embeddings_of(p).items():
        near = index.near[uid]
        node_of = index.node_of[uid]
        for emb in embs:
            touching = {}
            for i, x in enumerate(emb):
                for w, rank, ekey in near[x]:
                    t = touching.get(w)
                    if t is None:
                        touching[w] = [(i, rank, ekey)]
                    else:
                        t.append((i, rank, ekey))
            for x in emb:
                touching.pop(x, None)
            for w, attach in touching.items():
                if any(rank < owner for _, rank, _ in attach):
                    continue        # infrequent edge (rank -1) or owned by a smaller seed
                sig = (node_of[w], tuple((i, ekey) for i, _, ekey in attach))
                if sig not in invariant_of:
                    invariant_of[sig] = (node_of[w], tuple(sorted(rank for _, rank, _ in attach)))
                groups[sig][uid].append(emb + (w,))

    # pool signatures that could describe the same child before counting
    by_invariant = defaultdict(list)
    for sig in groups:
        by_invariant[invariant_of[sig]].append(sig)

    children = []
    for inv in sorted(by_invariant):
        sigs = by_invariant[inv]
        uids = set()
        for sig in sigs:
            uids.update(groups[sig])
        if len(pool.supporters(uids)) < search.minsup:
            continue
        merged = {}
        for sig in sorted(sigs):
            per_unit = groups[sig]
            sample_uid = next(iter(per_unit))
            sample = per_unit[sample_uid][0]
            child_graph = _child_graph(p.graph, graphs[sample_uid], sample, sig)
            code, order = canonical_traversal(child_graph)
            entry = merged.get(code.key)
            if entry is None:
                entry = merged[code.key] = (code, defaultdict(dict))
            perm = [int(x) for x in order]
            for uid, embs in per_unit.items():
                bucket = entry[1][uid]
                for emb in embs:
                    img = frozenset(emb)
                    if img not in bucket:
                        bucket[img] = tuple(emb[j] for j in perm)
        for key in sorted(merged):
            code, per_unit = merged[key]
            if key in search.seen:
                continue
            supporters = pool.supporters(per_unit)
            if len(supporters) < search.minsup:
                continue
            search.seen.add(key)
            embeddings = {uid: list(b.values()) for uid, b in sorted(per_unit.items())}
            total = sum(len(v) for v in embeddings.values())
            graph = code_to_netgraph(code, "pattern")
            child = Pattern(code, None, len(supporters), tuple(sorted(supporters)), k + 1,
                            embeddings if total <= search.max_embeddings else None, graph,
                            tuple(embeddings))
            children.append(child)
    return children


def _child_graph(parent: NetGraph, g: NetGraph, emb: tuple, sig) -> NetGraph:
    k = len(emb) - 1
    w = g.node(emb[k])
    new = str(k)
    edges = list(parent.edges)
    for i, _ in sig[1]:
        edges.append(NGEdge(str(i), new, g.adj[emb[i]][emb[k]].tagging_from(emb[i])))
    return NetGraph("pattern", list(parent.nodes) + [NGNode(new, w.label, w.tagging)], edges)


# ----------------------------------------------------------------------
# driver

_WORKER = {}


def _init_worker(*args):
    _WORKER["args"] = args


def _run_seed(seed_key):
    return _strip(_Search(*_WORKER["args"]).run(seed_key))


def _strip(patterns):
    for p in patterns:
        p.embeddings = None
        p.graph = None
        p.units = ()
    return patterns


def mine(ngs: Sequence[NetGraph], minsup: int, max_events: Optional[int] = None,
         threads: int = 1, max_embeddings: int = DEFAULT_MAX_EMBEDDINGS) -> MiningResult:
    """Mine every connected complete-subnet pattern present in at least
    ``minsup`` distinct input graphs."""
    ngs = list(ngs)
    fdfs, _, snng = build_and_filter(ngs, minsup)
    graphs = {ng.id: ng for ng in ngs}
    if len(graphs) != len(ngs):
        raise ValueError("net graph ids must be distinct")
    patterns = [Pattern(None, snng.renderings[k], len(g), tuple(sorted(g)), 1)
                for k, g in snng.support.items()]
    # every frequent identification seeds a search: an edge that only ever
    # closes a cycle never appears as a forward unit, yet is a pattern itself
    seeds = sorted(fdfs.support)
    if max_events is None or max_events >= 2:
        index = _Index(graphs, fdfs, snng)
        args = (graphs, fdfs, snng, minsup, max_events, max_embeddings, index)
        if threads > 1 and len(seeds) > 1:
            with ProcessPoolExecutor(max_workers=threads, initializer=_init_worker, initargs=args) as pool:
                for found in pool.map(_run_seed, seeds):
                    patterns.extend(found)
        else:
            for key in seeds:
                patterns.extend(_strip(_Search(*args).run(key)))
    return MiningResult(_bucket(patterns), minsup, len(ngs))


def default_threads() -> int:
    return max(1, os.cpu_count() or 1)


def pattern_to_net(p: Pattern, net_id: str = "pattern") -> Net:
    return netgraph_to_net(p.netgraph(), net_id)


def patterns_to_subnets(result: MiningResult) -> list[tuple[Net, int, tuple]]:
    """Back-transform every pattern into its complete subnet."""
    return [(pattern_to_net(p, f"p{i}"), p.support, p.supporters)
            for i, p in enumerate(result.patterns())]
