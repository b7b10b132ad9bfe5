"""Command line front end: ``pspan generate|plant|mine|oracle|validate|stats``.

Exit codes: 0 success, 1 validation failure, 2 usage, 3 I/O, 4 data format.
``PSPAN_SEED`` overrides ``--seed`` wherever a seed is accepted.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import json
import os
import resource
import sys
import time
from dataclasses import asdict

from . import __version__
from .errors import ConfigInvalid, PSpanError
from .generator import (GeneratorConfig, PlantingConfig, PlantingLedger, generate_reservoir, plant,
                        planting_report, tuned_config)
from .io import atomic_write_text, read_json, read_reservoir, write_json, write_reservoir
from .miner import DEFAULT_MAX_EMBEDDINGS, MiningResult, mine, patterns_to_subnets
from .net import net_to_dict
from .netgraph import net_to_netgraph
from .oracle import brute_force_mine, diff_results

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO, EXIT_DATA = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _seed(args) -> int:
    env = os.environ.get("PSPAN_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"PSPAN_SEED must be an integer, got {env!r}") from None
    return args.seed


def _positive(name, value):
    if value < 1:
        raise UsageError(f"--{name} must be at least 1")


def _peak_mib() -> float:
    # ru_maxrss is KiB on Linux
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024


def _table(rows, header) -> str:
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
    fmt = "  ".join(f"{{:>{w}}}" for w in widths)
    lines = [fmt.format(*header)] + [fmt.format(*map(str, r)) for r in rows]
    return "\n".join(lines)


# ----------------------------------------------------------------------
# commands

def cmd_generate(args) -> int:
    _positive("amount", args.amount)
    seed = _seed(args)
    if args.target_arcs is not None:
        _positive("target-arcs", args.target_arcs)
        cfg = tuned_config(args.target_arcs, args.amount, seed)
    else:
        cfg = GeneratorConfig(amount=args.amount, max_events=args.max_events, max_conds=args.max_conds,
                              random_events=args.random_events, random_conds=args.random_conds,
                              event_label_pool=args.event_labels, cond_label_pool=args.cond_labels, seed=seed)
    try:
        cfg.validate()
    except ConfigInvalid as exc:
        raise UsageError(str(exc)) from None
    nets = generate_reservoir(cfg)
    write_reservoir(args.output, nets)
    write_json(args.output + ".meta.json", {"seed": seed, "config": asdict(cfg), "version": __version__})
    print(f"wrote {len(nets)} nets to {args.output}")
    return EXIT_OK


def cmd_plant(args) -> int:
    nets = read_reservoir(args.input)
    seed = _seed(args)
    pcfg = PlantingConfig(n=args.n, g=args.g, max_conds=args.max_conds, minsup=args.minsup, seed=seed,
                          min_events=args.min_events, min_arcs=args.min_arcs, max_arcs=args.max_arcs)
    try:
        planted, ledger = plant(nets, pcfg)
    except ConfigInvalid as exc:
        raise UsageError(str(exc)) from None
    write_reservoir(args.output, planted)
    write_json(args.ledger, ledger.to_dict())
    rows = [(p.planting_id, len(ledger.net(p.planting_id).events), len(ledger.net(p.planting_id).arcs), p.m)
            for p in ledger.placements]
    print(_table(rows, ("planting net", "events", "arcs", "planted")))
    return EXIT_OK


def _netgraphs(nets):
    return [net_to_netgraph(n) for n in nets]


def cmd_mine(args) -> int:
    _positive("minsup", args.minsup)
    _positive("threads", args.threads)
    nets = read_reservoir(args.input)
    started = time.perf_counter()
    result = mine(_netgraphs(nets), args.minsup, max_events=args.max_events, threads=args.threads,
                  max_embeddings=args.max_embeddings)
    elapsed = time.perf_counter() - started
    write_json(args.output, result.to_dict())
    rows = [(f"FD[{j}]", len(bucket)) for j, bucket in enumerate(result.fd)]
    print(_table(rows, ("bucket", "patterns")))
    print(f"inputs {len(nets)}  minsup {args.minsup}  patterns {len(result.patterns())}  "
          f"elapsed {elapsed:.2f}s  peak memory {_peak_mib():.0f} MiB")
    return EXIT_OK


def cmd_oracle(args) -> int:
    _positive("minsup", args.minsup)
    nets = read_reservoir(args.input)
    classes = brute_force_mine(nets, args.minsup, args.max_events)
    patterns = [{"events": len(n.events), "support": s, "supporters": list(sup), "net": net_to_dict(n)}
                for n, s, sup in classes]
    write_json(args.output, {"minsup": args.minsup, "inputs": len(nets), "patterns": patterns})
    print(f"{len(classes)} frequent classes")
    return EXIT_OK


def cmd_validate(args) -> int:
    result = MiningResult.from_dict(read_json(args.results))
    if args.ledger:
        ledger = PlantingLedger.from_dict(read_json(args.ledger))
        report = planting_report(result, ledger)
        rows = [(r.planting_id, r.events, r.arcs, r.planted, r.mined, f"{r.ratio:.2f}",
                 "yes" if r.found else "NO", "yes" if r.extra_copies else "")
                for r in report.rows]
        print(_table(rows, ("planting net", "events", "arcs", "planted", "mined", "success", "found", "extra")))
        missing = [r.planting_id for r in report.rows if not (r.found and r.ratio >= 1.0)]
        if missing:
            print("missing: " + ", ".join(missing))
        if args.output:
            write_json(args.output, report.to_dict())
        return EXIT_OK if report.passed else EXIT_FAIL
    if not args.input:
        raise UsageError("validate needs --ledger or --input (oracle comparison)")
    nets = read_reservoir(args.input)
    max_events = args.max_events
    pspan = [(n, s, sup) for n, s, sup in patterns_to_subnets(result)
             if max_events is None or len(n.events) <= max_events]
    oracle = brute_force_mine(nets, result.minsup, max_events if max_events is not None else 16)
    diff = diff_results(pspan, oracle)
    print(f"pspan {len(pspan)} classes, oracle {len(oracle)} classes: "
          f"missing {len(diff.missing)}, extra {len(diff.extra)}, support mismatches {len(diff.support_mismatch)}")
    if args.output:
        write_json(args.output, diff.to_dict())
    print("equivalent" if diff.empty else "NOT equivalent")
    return EXIT_OK if diff.empty else EXIT_FAIL


def reservoir_stats(nets) -> tuple[float, float, float]:
    """Average arcs, average net-graph edges, and their ratio."""
    if not nets:
        return 0.0, 0.0, 0.0
    arcs = sum(len(n.arcs) for n in nets) / len(nets)
    edges = sum(len(net_to_netgraph(n).edges) for n in nets) / len(nets)
    return arcs, edges, (edges / arcs if arcs else 0.0)


def cmd_stats(args) -> int:
    rows = []
    for path in args.input:
        nets = read_reservoir(path)
        arn, aen, ratio = reservoir_stats(nets)
        rows.append((path, len(nets), f"{arn:.2f}", f"{aen:.2f}", f"{ratio:.4f}"))
    header = ("reservoir", "nets", "arn", "aen", "ratio")
    print(_table(rows, header))
    if args.output:
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        atomic_write_text(args.output, buf.getvalue())
    return EXIT_OK


# ----------------------------------------------------------------------
# argument parsing

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pspan", description="Frequent complete-subnet mining for pure C/E nets.")
    p.add_argument("--version", action="version", version=f"pspan {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate a random reservoir")
    g.add_argument("--amount", type=int, required=True)
    g.add_argument("--max-events", type=int, default=6, help="max 1-complete units per net (U)")
    g.add_argument("--max-conds", type=int, default=8, help="max conditions per event (H)")
    g.add_argument("--random-events", action="store_true", help="draw the unit count in [1, U]")
    g.add_argument("--random-conds", action="store_true", help="draw the condition count in [1, H]")
    g.add_argument("--event-labels", type=int, default=26, help="event label pool size")
    g.add_argument("--cond-labels", type=int, default=26, help="condition label pool size")
    g.add_argument("--target-arcs", type=int, help="tune U and H for this average arc count")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_generate)

    pl = sub.add_parser("plant", help="plant random nets into a reservoir")
    pl.add_argument("-i", "--input", required=True)
    pl.add_argument("-o", "--output", required=True)
    pl.add_argument("--ledger", required=True)
    pl.add_argument("--n", type=int, default=10, help="number of planting nets")
    pl.add_argument("--g", type=int, default=15, help="max events per planting net")
    pl.add_argument("--max-conds", type=int, default=2, help="max conditions per planting event")
    pl.add_argument("--min-events", type=int, default=1)
    pl.add_argument("--min-arcs", type=int, default=1)
    pl.add_argument("--max-arcs", type=int)
    pl.add_argument("--minsup", type=int, required=True)
    pl.add_argument("--seed", type=int, default=0)
    pl.set_defaults(func=cmd_plant)

    m = sub.add_parser("mine", help="mine frequent complete subnets")
    m.add_argument("-i", "--input", required=True)
    m.add_argument("-o", "--output", required=True)
    m.add_argument("--minsup", type=int, required=True)
    m.add_argument("--max-events", type=int, help="largest pattern to grow")
    m.add_argument("--threads", type=int, default=1)
    m.add_argument("--max-embeddings", type=int, default=DEFAULT_MAX_EMBEDDINGS)
    m.set_defaults(func=cmd_mine)

    o = sub.add_parser("oracle", help="brute-force mining of small nets")
    o.add_argument("-i", "--input", required=True)
    o.add_argument("-o", "--output", required=True)
    o.add_argument("--minsup", type=int, required=True)
    o.add_argument("--max-events", type=int, default=4)
    o.set_defaults(func=cmd_oracle)

    v = sub.add_parser("validate", help="check mining results against a ledger or the oracle")
    v.add_argument("-r", "--results", required=True)
    v.add_argument("--ledger")
    v.add_argument("-i", "--input", help="reservoir for the oracle comparison")
    v.add_argument("--max-events", type=int, help="pattern size bound for the oracle comparison")
    v.add_argument("-o", "--output")
    v.set_defaults(func=cmd_validate)

    s = sub.add_parser("stats", help="arc and net-graph edge statistics")
    s.add_argument("-i", "--input", nargs="+", required=True)
    s.add_argument("-o", "--output", help="CSV output")
    s.set_defaults(func=cmd_stats)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"pspan {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"pspan {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (PSpanError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        print(f"pspan {args.command}: bad input: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
