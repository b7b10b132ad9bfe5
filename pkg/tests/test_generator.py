import json

import pytest

from pspan.errors import ConfigInvalid, NoConditions
from pspan.generator import (GeneratorConfig, PlantingConfig, PlantingLedger, connect, connect_with_pairs,
                             gen_one_complete, generate_reservoir, plant, planting_report, stream, tuned_config)
from pspan.io import dump_net
from pspan.miner import mine
from pspan.net import Net, complete_closure, is_complete_subnet, labeled_isomorphic, validate_and_classify
from pspan.netgraph import net_to_netgraph


def test_streams_are_reproducible_and_independent():
    assert stream(1, "a", 0).random() == stream(1, "a", 0).random()
    assert stream(1, "a", 0).random() != stream(1, "a", 1).random()
    assert stream(1, "a", 0).random() != stream(2, "a", 0).random()


def test_reservoir_is_deterministic_and_well_formed():
    cfg = GeneratorConfig(amount=200, max_events=8, max_conds=6, seed=4)
    a = generate_reservoir(cfg)
    b = generate_reservoir(cfg)
    assert [dump_net(n) for n in a] == [dump_net(n) for n in b]
    assert len({n.id for n in a}) == 200
    for net in a:
        flags = validate_and_classify(net)
        assert flags.is_pure and flags.is_connected
        assert 1 <= len(net.events) <= 8
        for e in net.events:
            labels = [net.label(c) for c in net.neighbours(e.id)]
            assert len(labels) == len(set(labels))      # distinct per event


def test_fixed_mode_counts():
    nets = generate_reservoir(GeneratorConfig(amount=20, max_events=5, max_conds=3, random_events=False,
                                              random_conds=False, seed=1))
    for net in nets:
        assert len(net.events) == 5
        assert all(len(net.neighbours(e.id)) == 3 for e in net.events)


def test_config_validation():
    with pytest.raises(ConfigInvalid):
        GeneratorConfig(amount=0).validate()
    with pytest.raises(ConfigInvalid):
        GeneratorConfig(amount=1, max_conds=30).validate()
    with pytest.raises(ConfigInvalid):
        PlantingConfig(n=1, g=3, max_conds=2, minsup=10).validate(10)
    with pytest.raises(ConfigInvalid):
        PlantingConfig(n=1, g=3, max_conds=2, minsup=1, min_events=4).validate(10)


def test_gen_one_complete_and_connect():
    rng = stream(0, "t")
    one = gen_one_complete(4, False, rng)
    assert len(one.events) == 1 and len(one.conditions) == 4
    two, pairs = connect_with_pairs(one, gen_one_complete(4, False, rng, event_id="e1"), rng)
    assert len(two.events) == 2 and 1 <= len(pairs) <= 4
    assert len(two.conditions) == 8 - len(pairs)
    assert validate_and_classify(two).is_connected
    lonely = Net("x", [], [one.events[0]], [])
    with pytest.raises(NoConditions):
        connect(lonely, one, rng)


def test_merged_condition_label_follows_keep_labels():
    rng = stream(0, "labels")
    a = gen_one_complete(3, False, rng, cond_pool=["a", "b", "c"])
    b = gen_one_complete(3, False, rng, cond_pool=["x", "y", "z"], event_id="f")
    merged, pairs = connect_with_pairs(a, b, stream(1, "labels"), keep_labels="second")
    for c1, c2 in pairs:
        assert merged.label(c1) == b.label(c2)


def test_tuned_config_scales_conditions():
    assert tuned_config(50, 10).max_conds < tuned_config(500, 10).max_conds
    assert tuned_config(1000, 10).cond_label_pool >= tuned_config(1000, 10).max_conds


def test_planting_ledger_and_recall():
    nets = generate_reservoir(GeneratorConfig(amount=60, max_events=5, max_conds=6, seed=2))
    pcfg = PlantingConfig(n=3, g=5, max_conds=2, minsup=30, seed=2, min_events=3, min_arcs=4, max_arcs=9)
    planted, ledger = plant(nets, pcfg)
    assert len(planted) == 60
    for x in ledger.planting_nets:
        assert 3 <= len(x.events) <= 5 and 4 <= len(x.arcs) <= 9
    for p in ledger.placements:
        assert 30 < p.m <= 60 and len(p.targets) == p.m
    # the first planting's copy is the block of events added after the original ones
    by_id = {n.id: n for n in planted}
    original = {n.id: n for n in nets}
    first = ledger.placements[0]
    x = ledger.net(first.planting_id)
    for target_id in first.targets:
        target = by_id[target_id]
        known = {e.id for e in original[target_id].events}
        added = [e.id for e in target.events if e.id not in known][:len(x.events)]
        sub = complete_closure(target, added)
        assert is_complete_subnet(sub, target)
        assert labeled_isomorphic(sub, x)
    again = PlantingLedger.from_dict(json.loads(json.dumps(ledger.to_dict())))
    assert again.to_dict() == ledger.to_dict()
    report = planting_report(mine([net_to_netgraph(n) for n in planted], 30), ledger)
    assert report.passed
    assert all(r.found and r.ratio == 1.0 for r in report.rows)


def test_planting_is_deterministic():
    nets = generate_reservoir(GeneratorConfig(amount=30, max_events=4, max_conds=4, seed=9))
    pcfg = PlantingConfig(n=2, g=4, max_conds=2, minsup=10, seed=9)
    a, la = plant(nets, pcfg)
    b, lb = plant(nets, pcfg)
    assert [dump_net(n) for n in a] == [dump_net(n) for n in b]
    assert la.to_dict() == lb.to_dict()
