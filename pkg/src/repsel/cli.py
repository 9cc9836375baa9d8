"""Command-line entry point: ``repsel {gen,train,select,synth,verify,verify-claims,bench}``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import harness
from .cegis import Unsat, run_cegis, run_ours
from .core import BudgetExhausted, Dataset, ReprselError
from .domains import space_from_config
from .predictor import ExactPosterior, NeuralModel, NeuralPredictor, TrainConfig, train_committee
from .selection import random_select, select_by_name
from .solver import DEFAULT_BUDGET, make_strategy
from .verify import is_representative

log = logging.getLogger("repsel")


def _dump(obj, path: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def meta_path(data_path: str | Path) -> Path:
    p = Path(data_path)
    return p.with_name(p.name.removesuffix(".jsonl") + ".meta.json")


def _space_config(args) -> dict:
    if args.domain is None:
        meta = meta_path(args.data) if getattr(args, "data", None) else None
        if meta is None or not meta.exists():
            raise SystemExit("--domain is required when the dataset has no .meta.json sidecar")
        return json.loads(meta.read_text())["space"]
    cfg: dict = {"domain": args.domain}
    if args.domain == "ordering":
        cfg["n"] = args.n
    elif args.domain == "dfa":
        cfg["num_states"] = args.states
    else:
        if args.paper_scale:
            cfg["paper_scale"] = True
        if args.grid:
            cfg["width"] = cfg["height"] = args.grid
    return cfg


def _load(args):
    space = space_from_config(_space_config(args))
    return space, Dataset.read_jsonl(args.data, space.domain_id, space)


def _predictor(method: str, space, model_path: str | None):
    if method.startswith("exact"):
        return ExactPosterior(space)
    if not model_path:
        raise SystemExit(f"--model is required for method {method!r}")
    return NeuralPredictor.for_space(NeuralModel.load(model_path), space)


def cmd_gen(args) -> int:
    space = space_from_config(_space_config(args))
    size = args.size
    if size is not None and args.domain == "ordering" and size <= 1.0:
        size = float(size)
    elif size is not None:
        size = int(size)
    data, hidden = harness.gen_dataset(space, size, args.seed, min_len=args.min_len, max_len=args.max_len)
    data.write_jsonl(args.output, space)
    _dump({"space": space.config(), "hidden": space.program_to_json(hidden), "seed": args.seed,
           "size": len(data)}, str(meta_path(args.output)))
    return 0


def cmd_train(args) -> int:
    space = space_from_config(_space_config(args))
    cfg = TrainConfig(samples=args.samples, lr=args.lr, seed=args.seed, form=args.form,
                      min_len=args.min_len, max_len=args.max_len, log_every=args.log_every)
    train_committee(space, cfg).save(args.output)
    return 0


def cmd_select(args) -> int:
    space, data = _load(args)
    pred = _predictor(args.method, space, args.model) if args.method in ("nn", "exact-nn") else None
    result = select_by_name(args.method, space, data, fraction=args.fraction, tau=args.tau, seed=args.seed,
                            predictor=pred)
    result.subset.write_jsonl(args.output, space)
    trace = args.trace or str(Path(args.output).with_suffix(".trace.json"))
    _dump(result.trace_json(space), trace)
    return 0


def cmd_synth(args) -> int:
    space, data = _load(args)
    strategy = make_strategy({"rcegis": "random", "acegis": "fixed_arbitrary"}.get(args.method, "canonical"),
                             args.seed)
    budget = args.solver_budget
    try:
        if args.method == "ours":
            out = run_ours(space, data, _predictor("nn", space, args.model), args.tau, budget=budget)
        elif args.method == "exact-ours":
            out = run_ours(space, data, ExactPosterior(space), args.tau, budget=budget)
        else:
            initial = {
                "full": lambda: data,
                "rand-cegis": lambda: random_select(data, args.fraction, args.seed).subset,
                "h1-cegis": lambda: select_by_name("h1", space, data, seed=args.seed).subset,
            }.get(args.method, lambda: None)()
            out = run_cegis(space, data, initial, strategy, budget)
    except Unsat as exc:
        _dump({"status": "unsat", "message": str(exc)}, args.output)
        return 1
    except BudgetExhausted as exc:
        _dump({"status": "budget_exhausted", "message": str(exc)}, args.output)
        return 1
    _dump({"status": "ok", "method": args.method, **out.to_json(space)}, args.output)
    return 0


def cmd_verify(args) -> int:
    space, data = _load(args)
    subset = Dataset.read_jsonl(args.subset, space.domain_id, space)
    if not subset.subset_of(data):
        raise SystemExit("subset contains examples not in the dataset")
    verdict = is_representative(space, data, subset, args.solver_budget)
    _dump({"representative": verdict, "data_size": len(data), "subset_size": len(subset)}, args.output)
    return 0


def cmd_verify_claims(args) -> int:
    fn = harness.CLAIMS[args.claim]
    if args.claim == "lemma21":
        mono, sub = fn(args.trials, args.seed)
        report = {"claim_id": "lemma21", "trials": mono.trials + sub.trials, "failures": mono.failures + sub.failures,
                  "witnesses": [{"property": "monotone", **w} for w in mono.witnesses]
                  + [{"property": "submodular", **w} for w in sub.witnesses]}
    else:
        report = fn(args.trials if args.trials is not None else 50, args.seed).to_json()
    _dump(report, args.output)
    return 0 if report["failures"] == 0 else 1


def cmd_bench(args) -> int:
    tasks = harness.expand_config(json.loads(Path(args.config).read_text()))
    if args.solver_budget_set:
        for t in tasks:
            t.solver_budget = args.solver_budget
    records = harness.run_bench(tasks, args.workers)
    if args.output:
        harness.emit_csv(records, args.output)
    else:
        sys.stdout.write(harness.records_csv(records))
    return 0


def _globals(suppress: bool) -> argparse.ArgumentParser:
    """Global flags; accepted before or after the subcommand."""
    def d(value):
        return argparse.SUPPRESS if suppress else value
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--seed", type=int, default=d(0))
    g.add_argument("--solver-budget", type=int, default=d(None),
                   help=f"node limit per solver call (default {DEFAULT_BUDGET})")
    g.add_argument("--workers", type=int, default=d(1))
    g.add_argument("-v", "--verbose", action="store_true", default=d(False))
    return g


def build_parser() -> argparse.ArgumentParser:
    top, common = _globals(False), _globals(True)

    space = argparse.ArgumentParser(add_help=False)
    space.add_argument("--domain", choices=["ordering", "dfa", "drawing"])
    space.add_argument("--n", type=int, default=10, help="ordering: number of elements")
    space.add_argument("--states", type=int, default=6, help="dfa: number of states")
    space.add_argument("--grid", type=int, default=None, help="drawing: square grid side")
    space.add_argument("--paper-scale", action="store_true", help="drawing: 32x32 grid and full grammar")
    space.add_argument("--min-len", type=int, default=5, help="dfa: shortest string")
    space.add_argument("--max-len", type=int, default=10, help="dfa: longest string")

    p = argparse.ArgumentParser(prog="repsel", description=__doc__, parents=[top])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common, space], help="sample a hidden program and a labelled dataset")
    g.add_argument("--size", type=float, default=None, help="ordering: fraction or count of pairs; dfa: strings")
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_gen)

    t = sub.add_parser("train", parents=[common, space], help="train a committee/anticipation network")
    t.add_argument("--samples", type=int, default=20_000)
    t.add_argument("--lr", type=float, default=1e-4)
    t.add_argument("--form", choices=["committee", "anticipation"], default="committee")
    t.add_argument("--log-every", type=int, default=0)
    t.add_argument("-o", "--output", required=True)
    t.set_defaults(func=cmd_train)

    s = sub.add_parser("select", parents=[common, space], help="select a subset of a dataset")
    s.add_argument("--data", required=True)
    s.add_argument("--method", required=True, choices=["count", "nn", "exact-nn", "random", "h1", "hasse"])
    s.add_argument("--fraction", type=float, default=0.35)
    s.add_argument("--tau", type=float, default=0.95)
    s.add_argument("--model")
    s.add_argument("--trace", help="trace JSON path (default: <output>.trace.json)")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_select)

    y = sub.add_parser("synth", parents=[common, space], help="synthesize a program consistent with a dataset")
    y.add_argument("--data", required=True)
    y.add_argument("--method", default="cegis", choices=list(harness.SYNTH_METHODS))
    y.add_argument("--fraction", type=float, default=0.2, help="rand-cegis: initial fraction")
    y.add_argument("--tau", type=float, default=0.95)
    y.add_argument("--model")
    y.add_argument("-o", "--output")
    y.set_defaults(func=cmd_synth)

    v = sub.add_parser("verify", parents=[common, space], help="check that a subset is representative")
    v.add_argument("--data", required=True)
    v.add_argument("--subset", required=True)
    v.add_argument("-o", "--output")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("verify-claims", parents=[common], help="randomized/exhaustive checks of the theory")
    c.add_argument("--claim", required=True, choices=sorted(harness.CLAIMS))
    c.add_argument("--trials", type=int, default=None)
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_verify_claims)

    b = sub.add_parser("bench", parents=[common], help="run a benchmark config and emit CSV")
    b.add_argument("--config", required=True)
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    args.solver_budget_set = args.solver_budget is not None
    if args.solver_budget is None:
        args.solver_budget = DEFAULT_BUDGET
    elif args.solver_budget <= 0:
        raise SystemExit("--solver-budget must be positive")
    try:
        return args.func(args)
    except ReprselError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
