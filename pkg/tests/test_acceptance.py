"""The ten acceptance criteria, each reported as one PASS/FAIL line in the terminal summary.

Seeds are fixed up front (task seeds 0..N-1, model seeds in conftest); nothing
here is tuned to a particular outcome.
"""
from __future__ import annotations

import filecmp
import json
import time
from pathlib import Path

import numpy as np
import pytest

from repsel import cli
from repsel.cegis import run_ours
from repsel.domains import DfaSpace, DrawingSpace, OrderingSpace
from repsel.harness import (TaskConfig, claim1_report, claim2_report, claim3_report, gen_dataset, hasse_report,
                            lemma21_report, run_bench)
from repsel.predictor import NeuralPredictor
from repsel.selection import anticipation_select, hasse_select
from repsel.solver import check
from repsel.verify import greedy_bound, is_representative

from conftest import ACCEPTANCE_LINES
from test_predictor import finite_difference_error, random_net


def record(k: int, ok: bool, detail: str) -> None:
    line = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[k] = line
    print(line)


def test_criterion_1_greedy_is_representative():
    t0 = time.perf_counter()
    rep = claim1_report(trials=50, seed=0, n=5, sizes=(10, 20))
    secs = time.perf_counter() - t0
    ok = rep.trials == 50 and rep.failures == 0 and secs < 30
    record(1, ok, f"{rep.trials - rep.failures}/{rep.trials} greedy subsets representative ({secs:.1f}s)")
    assert ok


def test_criterion_2_argmin_equivalence():
    rep = claim3_report(trials=100, seed=0, max_n=5)
    ok = rep.trials >= 100 and rep.failures == 0
    record(2, ok, f"{rep.trials - rep.failures}/{rep.trials} states agree (exact)")
    assert ok


def test_criterion_3_submodular_monotone():
    t0 = time.perf_counter()
    mono, sub = lemma21_report(trials=None, seed=0, n=4, data_size=5)
    secs = time.perf_counter() - t0
    ok = mono.failures == sub.failures == 0 and mono.trials == 3**5 and secs < 60
    record(3, ok, f"exhaustive: {mono.trials} chains / {sub.trials} marginals, "
                  f"{mono.failures + sub.failures} violations ({secs:.1f}s)")
    assert ok


@pytest.mark.xfail(strict=True, reason="the real-valued bound is exceeded by one step on small instances; "
                                       "see test_criterion_4_integral_form")
def test_criterion_4_greedy_size_bound():
    quoted = greedy_bound(1.0e6, 20)
    rep = claim2_report(trials=30, seed=0, max_n=5)
    ok = 269 < quoted < 270 and rep.failures == 0
    witnesses = "; ".join(f"n={w['n']} greedy={w['greedy']} bound={w['bound']:.2f}" for w in rep.witnesses)
    record(4, ok, f"bound(1e6,20)={quoted:.2f}; {rep.trials - 1 - rep.failures}/{rep.trials - 1} tasks within "
                  f"bound" + (f" [exceeded: {witnesses}]" if witnesses else ""))
    assert ok


def test_criterion_4_integral_form():
    """Not a criterion by itself: the floor(bound)+1 form that the rem argument actually supports."""
    assert 269 < greedy_bound(1.0e6, 20) < 270
    rep = claim2_report(trials=30, seed=0, max_n=5, integral=True)
    assert rep.failures == 0


def test_criterion_5_hasse_optimal():
    rep = hasse_report(trials=30, seed=0, max_n=6)
    ok = rep.trials == 30 and rep.failures == 0
    record(5, ok, f"{rep.trials - rep.failures}/{rep.trials} Hasse subsets representative and minimum-size")
    assert ok


METHODS_6 = ["full", "cegis", "rcegis", "acegis", "rand-cegis", "h1-cegis", "ours"]


def test_criterion_6_cegis_total_correctness(dfa4_model, tmp_path):
    model = tmp_path / "dfa4.json"
    dfa4_model.save(model)
    tasks = [TaskConfig(f"dfa-{i:02d}", {"domain": "dfa", "num_states": 4}, 200, seed=i, methods=METHODS_6,
                        params={"model": str(model), "min_len": 1, "max_len": 8, "tau": 0.95,
                                "check_representative": False})
             for i in range(50)]
    recs = run_bench(tasks)
    good = sum(r.synth_consistent is True for r in recs)
    per_method = {m: sum(r.synth_consistent is True for r in recs if r.method == m) for m in METHODS_6}
    ok = len(recs) == 50 * len(METHODS_6) and good == len(recs)
    record(6, ok, f"{good}/{len(recs)} programs consistent with all 200 examples "
                  + " ".join(f"{m}={v}/50" for m, v in per_method.items()))
    assert ok


def test_criterion_7_gradients():
    worst = {}
    for arch in ("ordering_fc", "dfa_ff", "draw_conv"):
        errs = [finite_difference_error(*random_net(arch, ("committee", "anticipation")[i % 2], 100 + i))
                for i in range(20)]
        worst[arch] = max(errs)
    ok = all(e < 1e-4 for e in worst.values())
    record(7, ok, "max relative error " + ", ".join(f"{a}={e:.1e}" for a, e in worst.items()) + " (20 nets each)")
    assert ok


def test_criterion_8_ordering_nn_selection(ordering7_model):
    space = OrderingSpace(7)
    pred = NeuralPredictor.for_space(ordering7_model, space)
    frac_rng = np.random.default_rng(0)
    reps, sizes, hasse = 0, [], []
    for i in range(100):
        data, _ = gen_dataset(space, float(frac_rng.uniform(0.3, 1.0)), 1000 + i)
        sub = anticipation_select(pred, data, tau=0.95).subset
        reps += is_representative(space, data, sub) is True
        sizes.append(len(sub))
        hasse.append(len(hasse_select(data)))
    ratio = np.mean(sizes) / np.mean(hasse)
    ok = reps >= 60 and ratio <= 3.0
    record(8, ok, f"{reps}/100 representative; mean size {np.mean(sizes):.1f} vs Hasse {np.mean(hasse):.1f} "
                  f"(ratio {ratio:.2f})")
    assert ok


def test_criterion_9_drawing(draw_model):
    space = DrawingSpace()
    pred = NeuralPredictor.for_space(draw_model, space)
    small, exact, fracs = 0, 0, []
    for i in range(20):
        data, hidden = gen_dataset(space, None, 2000 + i)
        out = run_ours(space, data, pred, tau=0.95)
        frac = len(out.selection.subset) / len(data)
        fracs.append(frac)
        small += frac <= 0.40
        exact += np.array_equal(space.render(out.program), space.render(hidden))
    ok = small >= 16 and exact == 20
    record(9, ok, f"selection <= 40% of pixels on {small}/20 tasks (median {np.median(fracs):.0%}); "
                  f"render matches target {exact}/20")
    assert ok


def _cli_session(root: Path) -> list[Path]:
    root.mkdir()

    def run(*argv):
        code = cli.main([a.replace("@", f"{root}/") for a in argv])
        assert code in (0, 1)

    run("gen", "--domain", "ordering", "--n", "5", "--size", "0.7", "--seed", "4", "-o", "@ord.jsonl")
    run("gen", "--domain", "dfa", "--states", "3", "--size", "40", "--min-len", "1", "--max-len", "6",
        "--seed", "4", "-o", "@dfa.jsonl")
    run("gen", "--domain", "drawing", "--seed", "4", "-o", "@draw.jsonl")
    run("train", "--domain", "ordering", "--n", "5", "--samples", "500", "--lr", "1e-3", "--seed", "2",
        "-o", "@ord_model.json")
    run("train", "--domain", "dfa", "--states", "3", "--samples", "300", "--min-len", "1", "--max-len", "6",
        "--seed", "2", "-o", "@dfa_model.json")
    run("train", "--domain", "drawing", "--samples", "300", "--seed", "2", "-o", "@draw_model.json")
    for m in ("count", "nn", "exact-nn", "random", "h1", "hasse"):
        run("select", "--data", "@ord.jsonl", "--method", m, "--model", "@ord_model.json", "--seed", "1",
            "-o", f"@sel_{m}.jsonl")
    run("select", "--data", "@dfa.jsonl", "--method", "h1", "--seed", "1", "-o", "@sel_dfa.jsonl")
    run("select", "--data", "@draw.jsonl", "--method", "nn", "--model", "@draw_model.json", "-o", "@sel_draw.jsonl")
    for m in METHODS_6:
        run("synth", "--data", "@dfa.jsonl", "--method", m, "--model", "@dfa_model.json", "--seed", "3",
            "-o", f"@synth_{m}.json")
    run("synth", "--data", "@draw.jsonl", "--method", "ours", "--model", "@draw_model.json", "-o", "@synth_draw.json")
    run("verify", "--data", "@ord.jsonl", "--subset", "@sel_random.jsonl", "-o", "@verify.json")
    for claim in ("claim1", "claim2_bound", "claim3", "hasse", "lemma21"):
        run("verify-claims", "--claim", claim, "--trials", "5", "--seed", "6", "-o", f"@claim_{claim}.json")
    (root / "bench.json").write_text(json.dumps({"suites": [
        {"prefix": "o", "count": 2, "seed": 1, "space": {"domain": "ordering", "n": 5}, "size": 0.6,
         "methods": ["full", "cegis", "count", "nn"], "params": {"model": str(root / "ord_model.json")}},
        {"prefix": "d", "count": 2, "seed": 1, "space": {"domain": "dfa", "num_states": 3}, "size": 30,
         "methods": ["rcegis", "ours"], "params": {"model": str(root / "dfa_model.json"), "min_len": 1,
                                                   "max_len": 6}}]}))
    run("bench", "--config", "@bench.json", "--workers", "2", "-o", "@bench.csv")
    return sorted(p for p in root.iterdir() if p.name != "bench.json")


def _without_wall_ms(path: Path) -> list[list[str]]:
    rows = [line.split(",") for line in path.read_text().splitlines()]
    col = rows[0].index("wall_ms")
    return [r[:col] + r[col + 1:] for r in rows]


def test_criterion_10_cli_determinism(tmp_path):
    a = _cli_session(tmp_path / "a")
    b = _cli_session(tmp_path / "b")
    # the bench config embeds absolute model paths, so only file *names* must line up
    assert [p.name for p in a] == [p.name for p in b]
    diffs = []
    for pa, pb in zip(a, b):
        if pa.suffix == ".csv":
            same = _without_wall_ms(pa) == _without_wall_ms(pb)
        else:
            same = filecmp.cmp(pa, pb, shallow=False)
        if not same:
            diffs.append(pa.name)
    ok = not diffs and len(a) >= 30
    record(10, ok, f"{len(a) - len(diffs)}/{len(a)} output files byte-identical across reruns"
                   + (f" [differ: {', '.join(diffs)}]" if diffs else ""))
    assert ok
