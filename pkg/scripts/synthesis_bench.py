#!/usr/bin/env python3
"""DFA and drawing synthesis benchmarks: CEGIS flavours vs. selection-seeded CEGIS.

Trains (or loads) the domain network, writes a bench config, runs it through
the harness and prints per-method means. The CSV has the harness columns.

    python scripts/synthesis_bench.py dfa --states 4 --tasks 50 -o dfa.csv
    python scripts/synthesis_bench.py drawing --tasks 20 -o drawing.csv
"""
from __future__ import annotations

import argparse
import json
import logging
import tempfile
from collections import defaultdict
from pathlib import Path

import numpy as np

from repsel.domains import space_from_config
from repsel.harness import emit_csv, expand_config, run_bench
from repsel.predictor import TrainConfig, train_committee

METHODS = {
    "dfa": ["full", "cegis", "rcegis", "acegis", "rand-cegis", "h1-cegis", "ours"],
    "drawing": ["full", "cegis", "rcegis", "acegis", "h1-cegis", "ours"],
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("domain", choices=sorted(METHODS))
    ap.add_argument("--states", type=int, default=4)
    ap.add_argument("--strings", type=int, default=200)
    ap.add_argument("--min-len", type=int, default=1)
    ap.add_argument("--max-len", type=int, default=8)
    ap.add_argument("--paper-scale", action="store_true")
    ap.add_argument("--tasks", type=int, default=20)
    ap.add_argument("--samples", type=int, default=None, help="training samples (default: 100k dfa, 200k drawing)")
    ap.add_argument("--lr", type=float, default=1e-3)
    ap.add_argument("--tau", type=float, default=0.95)
    ap.add_argument("--model")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--check-representative", action="store_true")
    ap.add_argument("-o", "--output", required=True)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    if args.domain == "dfa":
        cfg = {"domain": "dfa", "num_states": args.states}
        samples = args.samples or 100_000
    else:
        cfg = {"domain": "drawing", "paper_scale": True} if args.paper_scale else {"domain": "drawing"}
        samples = args.samples or 200_000
    space = space_from_config(cfg)
    model_path = args.model
    if not model_path:
        model = train_committee(space, TrainConfig(samples=samples, lr=args.lr, seed=args.seed,
                                                   min_len=args.min_len, max_len=args.max_len, log_every=500))
        model_path = str(Path(tempfile.mkdtemp()) / "model.json")
        model.save(model_path)

    suite = {"prefix": args.domain, "count": args.tasks, "seed": args.seed * 10_000, "space": cfg,
             "size": args.strings if args.domain == "dfa" else None, "methods": METHODS[args.domain],
             "params": {"model": model_path, "tau": args.tau, "min_len": args.min_len, "max_len": args.max_len,
                        "check_representative": args.check_representative}}
    records = run_bench(expand_config({"suites": [suite]}), args.workers)
    emit_csv(records, args.output)
    Path(args.output).with_suffix(".config.json").write_text(json.dumps({"suites": [suite]}, indent=2))

    by = defaultdict(list)
    for r in records:
        by[r.method].append(r)
    print(f"{'method':<11} {'examples':>9} {'iters':>7} {'nodes':>9} {'ms':>9} {'consistent':>11}")
    for m, rs in by.items():
        print(f"{m:<11} {np.mean([r.subset_size for r in rs]):9.1f} {np.mean([r.cegis_iterations for r in rs]):7.1f} "
              f"{np.mean([r.solver_nodes for r in rs]):9.0f} {np.mean([r.wall_ms for r in rs]):9.1f} "
              f"{sum(r.synth_consistent is True for r in rs):>5}/{len(rs)}")


if __name__ == "__main__":
    main()
