"""Random pure C/E net reservoirs and planting of known nets for validation.

Nets are built by chaining single-event ("1-complete") units: each new unit
is merged with the net so far on a random number of condition pairs.  Pairs
are drawn without replacement on both sides, and a pair is only eligible if
the merged label does not give an event two conditions with the same label;
together these keep every net pure and keep one condition node per edge
label.

Randomness: every net draws from its own Mersenne Twister stream, seeded
from ``sha256("<seed>/<stream>/<index>")``, so outputs do not depend on
generation order and are identical across platforms.
"""
from __future__ import annotations

import hashlib
import random
import string
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import ConfigInvalid, NoConditions
from .net import Arc, ConditionNode, EventNode, Net, net_from_dict, net_to_dict
from .netgraph import net_to_netgraph


def stream(seed: int, name: str, index: int = 0) -> random.Random:
    """Independent, reproducible PRNG stream number ``index`` of ``name``."""
    digest = hashlib.sha256(f"{seed}/{name}/{index}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def label_pool(size: int, letters: str) -> list[str]:
    """``size`` distinct labels: the letters first, then letters with a
    numeric suffix."""
    return [letters[i % 26] + (str(i // 26) if i >= 26 else "") for i in range(size)]


def event_labels(size: int) -> list[str]:
    return label_pool(size, string.ascii_uppercase)


def condition_labels(size: int) -> list[str]:
    return label_pool(size, string.ascii_lowercase)


@dataclass(frozen=True)
class GeneratorConfig:
    amount: int
    max_events: int = 6          # U
    max_conds: int = 8           # H
    random_events: bool = True   # rU
    random_conds: bool = True    # rH
    event_label_pool: int = 26
    cond_label_pool: int = 26
    seed: int = 0

    def validate(self) -> "GeneratorConfig":
        for name in ("amount", "max_events", "max_conds", "event_label_pool", "cond_label_pool"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ConfigInvalid(f"{name} must be a positive integer, got {value!r}")
        if self.max_conds > self.cond_label_pool:
            raise ConfigInvalid("max_conds cannot exceed cond_label_pool (labels are distinct per event)")
        return self


@dataclass(frozen=True)
class PlantingConfig:
    n: int
    g: int                       # max events per planting net
    max_conds: int               # H for planting nets
    minsup: int
    seed: int = 0
    min_events: int = 1
    min_arcs: int = 1
    max_arcs: Optional[int] = None
    random_conds: bool = True
    event_label_pool: int = 26
    cond_label_pool: int = 26
    max_tries: int = 100_000

    def validate(self, reservoir_size: int) -> "PlantingConfig":
        if self.n < 1:
            raise ConfigInvalid("at least one planting net is required")
        if self.g < 1 or self.max_conds < 1:
            raise ConfigInvalid("g and max_conds must be positive")
        if not 0 <= self.minsup < reservoir_size:
            raise ConfigInvalid(f"minsup must lie in [0, {reservoir_size}) for {reservoir_size} test nets")
        if self.min_events > self.g:
            raise ConfigInvalid("min_events exceeds g")
        if self.max_arcs is not None and self.max_arcs < self.min_arcs:
            raise ConfigInvalid("max_arcs below min_arcs")
        if self.max_conds > self.cond_label_pool:
            raise ConfigInvalid("max_conds cannot exceed cond_label_pool")
        return self


# ----------------------------------------------------------------------
# building blocks

def gen_one_complete(max_conds: int, random_conds: bool, rng: random.Random, *,
                     event_pool: Sequence[str] = None, cond_pool: Sequence[str] = None,
                     event_id: str = "e0", cond_prefix: str = "c") -> Net:
    """A single event with 1..H distinct-label conditions split randomly
    into inputs and outputs."""
    event_pool = event_labels(26) if event_pool is None else event_pool
    cond_pool = condition_labels(26) if cond_pool is None else cond_pool
    if max_conds < 1:
        raise ConfigInvalid("max_conds must be at least 1")
    if max_conds > len(cond_pool):
        raise ConfigInvalid("max_conds exceeds the condition label pool")
    total = rng.randint(1, max_conds) if random_conds else max_conds
    n_in = rng.randint(0, total)
    labels = rng.sample(list(cond_pool), total)
    ev = EventNode(event_id, rng.choice(list(event_pool)))
    conds = [ConditionNode(f"{cond_prefix}{i}", lab) for i, lab in enumerate(labels)]
    arcs = [Arc(c.id, ev.id) if i < n_in else Arc(ev.id, c.id) for i, c in enumerate(conds)]
    return Net(ev.id, conds, [ev], arcs)


def _fresh(prefix: str, taken: set):
    i = 0
    while True:
        candidate = f"{prefix}{i}"
        if candidate not in taken:
            taken.add(candidate)
            yield candidate
        i += 1


def connect_with_pairs(n1: Net, n2: Net, rng: random.Random, keep_labels: str = "first",
                       mergeable: Optional[Iterable[str]] = None) -> tuple[Net, list]:
    """Merge ``n2`` into ``n1``; returns the net and the merged
    ``(n1 condition id, n2 condition id)`` pairs.

    ``n1`` keeps its node ids; ``n2``'s nodes get fresh ids.  A merged
    condition keeps the id of the ``n1`` side and the label of the side
    named by ``keep_labels``.  ``mergeable`` restricts the ``n1`` side.
    """
    if keep_labels not in ("first", "second"):
        raise ValueError("keep_labels must be 'first' or 'second'")
    if not n1.conditions or not n2.conditions:
        raise NoConditions("both nets need at least one condition to connect")
    side1 = [c.id for c in n1.conditions] if mergeable is None else \
        [c.id for c in n1.conditions if c.id in set(mergeable)]
    if not side1:
        raise NoConditions(f"net {n1.id!r} has no mergeable condition")
    side2 = [c.id for c in n2.conditions]
    nxc = rng.randint(1, min(len(side1), len(side2)))

    # labels currently carried by each event, to keep them distinct
    labels = {}
    for net in (n1, n2):
        for e in net.events:
            labels[(net is n2, e.id)] = {net.label(c): c for c in net.neighbours(e.id)}

    def compatible(a, b):
        if keep_labels == "first":
            new, renamed, net, side = n1.label(a), b, n2, True
        else:
            new, renamed, net, side = n2.label(b), a, n1, False
        for e in net.neighbours(renamed):
            holder = labels[(side, e)].get(new)
            if holder is not None and holder != renamed:
                return False
        return True

    pairs = []
    avail1, avail2 = list(side1), list(side2)
    while len(pairs) < nxc and avail1 and avail2:
        a = avail1.pop(rng.randrange(len(avail1)))
        options = [b for b in avail2 if compatible(a, b)]
        if not options:
            continue
        b = options[rng.randrange(len(options))]
        avail2.remove(b)
        pairs.append((a, b))
        new = n1.label(a) if keep_labels == "first" else n2.label(b)
        for side, net, cid in ((False, n1, a), (True, n2, b)):
            for e in net.neighbours(cid):
                tags = labels[(side, e)]
                old = net.label(cid)
                if tags.get(old) == cid:
                    del tags[old]
                tags[new] = cid
    if not pairs:
        raise NoConditions("no label-compatible condition pair exists")

    taken = {c.id for c in n1.conditions} | {e.id for e in n1.events}
    merged_into = {b: a for a, b in pairs}
    relabel = {a: n2.label(b) for a, b in pairs} if keep_labels == "second" else {}
    cond_ids = {}
    new_cond = _fresh("c", taken)
    for c in n2.conditions:
        cond_ids[c.id] = merged_into.get(c.id) or next(new_cond)
    new_event = _fresh("e", taken)
    event_ids = {e.id: next(new_event) for e in n2.events}
    ids = {**cond_ids, **event_ids}

    conditions = [ConditionNode(c.id, relabel.get(c.id, c.label), c.capacity) for c in n1.conditions]
    conditions += [ConditionNode(cond_ids[c.id], c.label, c.capacity)
                   for c in n2.conditions if c.id not in merged_into]
    events = list(n1.events) + [EventNode(event_ids[e.id], e.label) for e in n2.events]
    arcs = list(n1.arcs) + [Arc(ids[a.source], ids[a.target], a.weight, a.inhibitor) for a in n2.arcs]
    return Net(n1.id, conditions, events, arcs), pairs


def connect(n1: Net, n2: Net, rng: random.Random, keep_labels: str = "first",
            mergeable: Optional[Iterable[str]] = None) -> Net:
    """``n1 [+] n2``: merge a random number of condition pairs."""
    return connect_with_pairs(n1, n2, rng, keep_labels, mergeable)[0]


def generate_net(rng: random.Random, net_id: str, max_events: int, max_conds: int,
                 random_events: bool = True, random_conds: bool = True,
                 event_pool: Sequence[str] = None, cond_pool: Sequence[str] = None) -> Net:
    """Chain ``num`` single-event units into one connected pure net."""
    num = rng.randint(1, max_events) if random_events else max_events
    net = gen_one_complete(max_conds, random_conds, rng, event_pool=event_pool, cond_pool=cond_pool)
    for _ in range(num - 1):
        unit = gen_one_complete(max_conds, random_conds, rng, event_pool=event_pool, cond_pool=cond_pool)
        net = connect(net, unit, rng)
    return net.with_id(net_id)


def generate_reservoir(cfg: GeneratorConfig) -> list[Net]:
    """``cfg.amount`` connected pure nets, net ``i`` drawn from stream ``i``."""
    cfg.validate()
    events = event_labels(cfg.event_label_pool)
    conds = condition_labels(cfg.cond_label_pool)
    return [generate_net(stream(cfg.seed, "reservoir", i), f"n{i}", cfg.max_events, cfg.max_conds,
                         cfg.random_events, cfg.random_conds, events, conds)
            for i in range(cfg.amount)]


def tuned_config(target_arcs: int, amount: int, seed: int = 0, events: int = 14) -> GeneratorConfig:
    """Config whose nets average roughly ``target_arcs`` arcs with a fixed
    event count (used for compression statistics)."""
    h = max(1, round(2 * target_arcs / events - 1))
    return GeneratorConfig(amount=amount, max_events=events, max_conds=h, random_events=False,
                           random_conds=True, cond_label_pool=max(26, h), seed=seed)


# ----------------------------------------------------------------------
# planting

@dataclass
class Placement:
    planting_id: str
    m: int
    targets: list
    merged: list = field(default_factory=list)   # merged condition count per target


@dataclass
class PlantingLedger:
    planting_nets: list
    placements: list
    seed: int
    config: dict

    def net(self, planting_id: str) -> Net:
        return next(x for x in self.planting_nets if x.id == planting_id)

    def to_dict(self) -> dict:
        return {
            "planting_nets": [net_to_dict(x) for x in self.planting_nets],
            "placements": [asdict(p) for p in self.placements],
            "seed": self.seed,
            "config": self.config,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PlantingLedger":
        return cls([net_from_dict(x) for x in data["planting_nets"]],
                   [Placement(p["planting_id"], p["m"], list(p["targets"]), list(p.get("merged", [])))
                    for p in data["placements"]],
                   data.get("seed", 0), data.get("config", {}))


def generate_planting_net(pcfg: PlantingConfig, index: int) -> Net:
    rng = stream(pcfg.seed, "planting-net", index)
    events = event_labels(pcfg.event_label_pool)
    conds = condition_labels(pcfg.cond_label_pool)
    for _ in range(pcfg.max_tries):
        x = generate_net(rng, f"x{index}", pcfg.g, pcfg.max_conds, True, pcfg.random_conds, events, conds)
        if len(x.events) < pcfg.min_events or len(x.arcs) < pcfg.min_arcs:
            continue
        if pcfg.max_arcs is not None and len(x.arcs) > pcfg.max_arcs:
            continue
        return x
    raise ConfigInvalid("could not draw a planting net within the requested size ranges")


def _disjoint_union(y: Net, x: Net) -> Net:
    taken = {c.id for c in y.conditions} | {e.id for e in y.events}
    new_cond, new_event = _fresh("c", taken), _fresh("e", taken)
    ids = {c.id: next(new_cond) for c in x.conditions}
    ids.update({e.id: next(new_event) for e in x.events})
    return Net(y.id,
               list(y.conditions) + [ConditionNode(ids[c.id], c.label, c.capacity) for c in x.conditions],
               list(y.events) + [EventNode(ids[e.id], e.label) for e in x.events],
               list(y.arcs) + [Arc(ids[a.source], ids[a.target], a.weight, a.inhibitor) for a in x.arcs])


def plant(reservoir: Sequence[Net], pcfg: PlantingConfig) -> tuple[list[Net], PlantingLedger]:
    """Insert ``pcfg.n`` random planting nets into more than ``minsup`` test
    nets each.  The planted copy keeps its own condition labels, so each
    planting net stays a complete subnet of every net it went into."""
    if not reservoir:
        raise ConfigInvalid("the reservoir is empty")
    total = len(reservoir)
    pcfg.validate(total)
    nets = list(reservoir)
    # only conditions of the original test net that were never merged may
    # be merged again, so earlier planted copies are left intact
    free = [{c.id for c in y.conditions} for y in nets]
    planting_nets, placements = [], []
    for i in range(pcfg.n):
        x = generate_planting_net(pcfg, i)
        rng = stream(pcfg.seed, "placement", i)
        m = rng.randint(pcfg.minsup + 1, total)
        targets = sorted(rng.sample(range(total), m))
        merged = []
        for t in targets:
            merge_rng = stream(pcfg.seed, f"merge-{i}", t)
            try:
                nets[t], pairs = connect_with_pairs(nets[t], x, merge_rng, "second", free[t])
            except NoConditions:
                # nothing left to merge with (or no label-compatible pair)
                nets[t], pairs = _disjoint_union(nets[t], x), []
            free[t] -= {a for a, _ in pairs}
            merged.append(len(pairs))
        planting_nets.append(x)
        placements.append(Placement(x.id, m, [nets[t].id for t in targets], merged))
    ledger = PlantingLedger(planting_nets, placements, pcfg.seed, asdict(pcfg))
    return nets, ledger


# ----------------------------------------------------------------------
# validation report

@dataclass(frozen=True)
class PlantingRow:
    planting_id: str
    events: int
    arcs: int
    planted: int
    found: bool
    mined: int
    ratio: float
    extra_copies: bool


@dataclass(frozen=True)
class PlantingReport:
    rows: tuple
    passed: bool

    def to_dict(self) -> dict:
        return {"passed": self.passed, "rows": [asdict(r) for r in self.rows]}


def planting_report(result, ledger: PlantingLedger) -> PlantingReport:
    """Look up every planting net among the mined complete subnets.

    Only patterns with the planting net's event and net-graph edge counts
    are back-transformed; the match itself is a labeled isomorphism test.
    """
    from .miner import pattern_to_net
    from .oracle import ClassIndex

    shapes = {(len(x.events), len(net_to_netgraph(x).edges)) for x in ledger.planting_nets}
    index = ClassIndex()
    for i, pat in enumerate(result.patterns()):
        if (pat.events, pat.edges) in shapes:
            index.add(pattern_to_net(pat, f"p{i}"), pat.support)
    rows = []
    for p in ledger.placements:
        x = ledger.net(p.planting_id)
        hit = index.find(x)
        mined = hit[1] if hit is not None else 0
        planted = len(p.targets)
        ratio = mined / planted if planted else 1.0
        rows.append(PlantingRow(x.id, len(x.events), len(x.arcs), planted, hit is not None,
                                mined, ratio, mined > planted))
    passed = all(r.found and r.ratio >= 1.0 for r in rows)
    return PlantingReport(tuple(rows), passed)
