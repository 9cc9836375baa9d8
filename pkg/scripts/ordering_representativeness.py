#!/usr/bin/env python3
"""Ordering experiment: how often are selected subsets representative, and how large are they?

Compares NN-guided anticipation selection against the count-oracle greedy,
Hasse (optimal) and random-x baselines on random total orders.

    python scripts/ordering_representativeness.py --n 7 --samples 200000 --tasks 100 -o ordering.csv
"""
from __future__ import annotations

import argparse
import csv
import logging
import time
from pathlib import Path

import numpy as np

from repsel.domains import OrderingSpace
from repsel.harness import gen_dataset
from repsel.predictor import NeuralModel, NeuralPredictor, TrainConfig, train_committee
from repsel.selection import greedy_count_select, hasse_select, random_select, anticipation_select
from repsel.verify import is_representative


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n", type=int, default=7)
    ap.add_argument("--samples", type=int, default=200_000)
    ap.add_argument("--lr", type=float, default=1e-4)
    ap.add_argument("--model", help="load this model instead of training one")
    ap.add_argument("--save-model")
    ap.add_argument("--tasks", type=int, default=100)
    ap.add_argument("--tau", type=float, default=0.95)
    ap.add_argument("--random-fractions", type=float, nargs="*", default=[0.2, 0.4, 0.6])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("-o", "--output", default="ordering.csv")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    space = OrderingSpace(args.n)
    if args.model:
        model = NeuralModel.load(args.model)
    else:
        t0 = time.perf_counter()
        model = train_committee(space, TrainConfig(samples=args.samples, lr=args.lr, seed=args.seed,
                                                   log_every=1000))
        logging.info("trained in %.1fs", time.perf_counter() - t0)
        if args.save_model:
            model.save(args.save_model)
    pred = NeuralPredictor.for_space(model, space)

    frac_rng = np.random.default_rng(args.seed)
    rows = []
    for i in range(args.tasks):
        data, _ = gen_dataset(space, float(frac_rng.uniform(0.3, 1.0)), args.seed * 100_000 + 1000 + i)
        subsets = {
            "nn": anticipation_select(pred, data, args.tau).subset,
            "count": greedy_count_select(space, data).subset,
            "hasse": hasse_select(data),
        }
        for f in args.random_fractions:
            subsets[f"random-{int(f * 100)}"] = random_select(data, f, seed=i).subset
        for method, sub in subsets.items():
            rows.append({"task": i, "method": method, "data_size": len(data), "subset_size": len(sub),
                         "representative": is_representative(space, data, sub)})

    with Path(args.output).open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)

    print(f"{'method':<12} {'repr%':>6} {'mean size':>10}")
    for method in dict.fromkeys(r["method"] for r in rows):
        rs = [r for r in rows if r["method"] == method]
        rep = np.mean([r["representative"] is True for r in rs]) * 100
        print(f"{method:<12} {rep:6.1f} {np.mean([r['subset_size'] for r in rs]):10.2f}")


if __name__ == "__main__":
    main()
