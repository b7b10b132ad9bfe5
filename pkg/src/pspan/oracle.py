"""Brute-force reference miner for small nets.

Enumerates every connected event subset, takes its complete closure, and
classes the resulting subnets by labeled isomorphism.  Classes are bucketed
by a plain structural invariant and confirmed with the exhaustive matcher;
nothing here uses DFS codes, so the oracle stays independent of the
canonicalization it is used to check.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import SizeGuardExceeded
from .net import Net, complete_closure, labeled_isomorphic, net_to_dict

MAX_ORACLE_EVENTS = 16


def invariant(net: Net) -> tuple:
    """Isomorphism-invariant summary used only for bucketing."""
    events = []
    for e in net.events:
        entries = []
        for c in net.neighbours(e.id):
            cond = net.condition(c)
            a = net.arc(c, e.id)
            kind = ("in", a.weight, a.inhibitor) if a is not None else ("out", net.arc(e.id, c).weight, False)
            entries.append((kind, cond.label, -1 if cond.capacity is None else cond.capacity))
        events.append((e.label, tuple(sorted(entries))))
    return (tuple(sorted(events)), len(net.conditions), len(net.arcs))


class ClassIndex:
    """Labeled-isomorphism classes with attached support counts."""

    def __init__(self):
        self._buckets = defaultdict(list)
        self.classes = []           # [net, support, supporters]

    def find_entry(self, net: Net) -> Optional[list]:
        for entry in self._buckets[invariant(net)]:
            if labeled_isomorphic(entry[0], net, max_events=max(32, len(net.events))):
                return entry
        return None

    def find(self, net: Net) -> Optional[tuple]:
        entry = self.find_entry(net)
        return None if entry is None else (entry[0], entry[1])

    def add(self, net: Net, support: int = 0, supporters: Iterable[str] = ()) -> list:
        entry = self.find_entry(net)
        if entry is None:
            entry = [net, support, set(supporters)]
            self._buckets[invariant(net)].append(entry)
            self.classes.append(entry)
        return entry


def _event_neighbours(net: Net) -> dict:
    out = {}
    for e in net.events:
        near = set()
        for c in net.neighbours(e.id):
            near.update(net.neighbours(c))
        near.discard(e.id)
        out[e.id] = near
    return out


def connected_event_subsets(net: Net, max_events: int) -> list[frozenset]:
    """Every set of at most ``max_events`` events that is connected through
    shared conditions."""
    near = _event_neighbours(net)
    seen = set()
    frontier = [frozenset([e.id]) for e in net.events]
    seen.update(frontier)
    size = 1
    while frontier and size < max_events:
        nxt = []
        for s in frontier:
            for e in s:
                for f in near[e]:
                    if f not in s:
                        t = s | {f}
                        if t not in seen:
                            seen.add(t)
                            nxt.append(t)
        frontier = nxt
        size += 1
    order = {e.id: i for i, e in enumerate(net.events)}
    return sorted(seen, key=lambda s: (len(s), sorted(order[e] for e in s)))


def _guard(net: Net):
    if len(net.events) > MAX_ORACLE_EVENTS:
        raise SizeGuardExceeded(
            f"net {net.id!r} has {len(net.events)} events; the oracle accepts at most {MAX_ORACLE_EVENTS}")


def enumerate_connected_complete_subnets(net: Net, max_events: int) -> list[Net]:
    """One complete subnet per isomorphism class of connected event subsets
    of size 1..max_events."""
    _guard(net)
    index = ClassIndex()
    for s in connected_event_subsets(net, max_events):
        index.add(complete_closure(net, s))
    return [entry[0] for entry in index.classes]


def brute_force_mine(nets: Sequence[Net], minsup: int, max_events: int) -> list[tuple[Net, int, tuple]]:
    """Classes of connected complete subnets found in at least ``minsup``
    distinct nets, as ``(net, support, supporters)``."""
    for net in nets:
        _guard(net)
    index = ClassIndex()
    for net in nets:
        for sub in enumerate_connected_complete_subnets(net, max_events):
            entry = index.add(sub)
            entry[2].add(net.id)
    out = []
    for sub, _, supporters in index.classes:
        if len(supporters) >= minsup:
            out.append((sub, len(supporters), tuple(sorted(supporters))))
    out.sort(key=lambda t: (len(t[0].events), len(t[0].arcs), invariant(t[0])))
    return out


@dataclass
class DiffReport:
    missing: list = field(default_factory=list)     # in oracle, not in pspan: (net, support)
    extra: list = field(default_factory=list)       # in pspan, not in oracle: (net, support)
    support_mismatch: list = field(default_factory=list)   # (net, pspan support, oracle support)

    @property
    def empty(self) -> bool:
        return not (self.missing or self.extra or self.support_mismatch)

    def to_dict(self) -> dict:
        return {
            "equivalent": self.empty,
            "missing": [{"net": net_to_dict(n), "support": s} for n, s in self.missing],
            "extra": [{"net": net_to_dict(n), "support": s} for n, s in self.extra],
            "support_mismatch": [{"net": net_to_dict(n), "pspan": a, "oracle": b}
                                 for n, a, b in self.support_mismatch],
        }


def diff_results(pspan: Iterable[tuple], oracle: Iterable[tuple]) -> DiffReport:
    """Match two result lists (``(net, support, ...)`` tuples) class by class."""
    report = DiffReport()
    index = ClassIndex()
    for item in oracle:
        index.add(item[0], item[1])
    matched = Counter()
    for item in pspan:
        entry = index.find_entry(item[0])
        if entry is None:
            report.extra.append((item[0], item[1]))
            continue
        matched[id(entry)] += 1
        if matched[id(entry)] > 1:
            report.extra.append((item[0], item[1]))
        elif entry[1] != item[1]:
            report.support_mismatch.append((item[0], item[1], entry[1]))
    for entry in index.classes:
        if not matched[id(entry)]:
            report.missing.append((entry[0], entry[1]))
    return report
