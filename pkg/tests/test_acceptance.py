"""Acceptance suite: one test per criterion, each printing a PASS/FAIL
line (run with `pytest -s tests/test_acceptance.py` to see them).

Thresholds and trial counts live in acceptance_config.json. Randomized
sweeps log the failing seeds so any red run is reproducible.
"""

import json
import time
from collections import Counter
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from sparsesum.approxset import capped_sumset, is_approximation, shift_down, sparsify
from sparsesum.cli import bench_scaling, parse_eps_sweep
from sparsesum.core import (
    INFINITY,
    PartitionInstance,
    SubsetSumInstance,
)
from sparsesum.hardness import (
    bellman_knapsack,
    gap_subset_sum,
    knapsack_to_gap_instance,
    solve_knapsack_via_gap,
)
from sparsesum.minconv import ExtSeq, UNDEFINED, batch_min_conv, max_conv, min_conv
from sparsesum.partition import approximate_partition, reconstruct_partition
from sparsesum.subsetsum import approximate_subset_sum, reconstruct
from sparsesum.testkit import (
    bruteforce_opt,
    gen_instance,
    minconv_oracle_fast,
    naive_sumset,
    subset_sums_bitset,
)

CONFIG = json.loads((Path(__file__).parent / "acceptance_config.json").read_text())


def report(num: int, ok: bool, detail: str) -> None:
    mark = "PASS" if ok else "FAIL"
    print(f"\nACCEPTANCE {num:2d} {mark}: {detail}")
    assert ok, f"criterion {num}: {detail}"


def _random_extseq(rng, max_len, max_entry):
    n = int(rng.integers(1, max_len + 1))
    vals = rng.integers(-max_entry, max_entry + 1, size=n)
    undef = rng.random(n) < rng.uniform(0.0, 0.6)
    return ExtSeq(
        [UNDEFINED if u else int(v) for v, u in zip(vals, undef)]
    )


def test_criterion_01_conv_oracle():
    cfg = CONFIG["conv_oracle"]
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    mismatches = 0
    for case in range(cfg["cases"]):
        A = _random_extseq(rng, cfg["max_len"], cfg["max_entry"])
        B = _random_extseq(rng, cfg["max_len"], cfg["max_entry"])
        if min_conv(A, B).entries != tuple(minconv_oracle_fast(A, B)):
            mismatches += 1
        if max_conv(A, B).entries != tuple(minconv_oracle_fast(A, B, use_max=True)):
            mismatches += 1
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed < cfg["budget_s"]
    report(
        1,
        ok,
        f"min/max conv vs double-loop oracle on {cfg['cases']} cases: "
        f"{mismatches} mismatches, {elapsed:.1f}s (< {cfg['budget_s']}s)",
    )


def test_criterion_02_packing_lemma():
    cfg = CONFIG["packing"]
    rng = np.random.default_rng(202)
    mismatches = 0
    for batch_idx in range(cfg["batches"]):
        m = int(rng.integers(1, cfg["max_m"] + 1))
        max_entry = int(rng.integers(1, 10**6))
        instances = []
        for _ in range(m):
            n_r = int(rng.integers(1, cfg["max_n"] + 1))
            undef_p = rng.uniform(0.0, 0.5)

            def mk():
                return ExtSeq(
                    [
                        UNDEFINED
                        if rng.random() < undef_p
                        else int(rng.integers(0, max_entry + 1))
                        for _ in range(n_r)
                    ]
                )

            instances.append((mk(), mk()))
        batched = batch_min_conv(instances)
        for r, (a, b) in enumerate(instances):
            if batched[r] != min_conv(a, b):
                mismatches += 1
    report(
        2,
        mismatches == 0,
        f"batched packing vs per-instance on {cfg['batches']} batches: "
        f"{mismatches} mismatched instances",
    )


def _random_set(rng, t, max_size=60):
    size = int(rng.integers(1, max_size))
    vals = {0} | {int(x) for x in rng.integers(0, t + 1, size=size)}
    return sorted(vals)


def test_criterion_03_algebra_lemmas():
    cfg = CONFIG["algebra"]
    trials = cfg["trials_per_lemma"]
    failures = {name: [] for name in
                ("sparsification", "transitivity", "sandwich", "union", "sumset", "downshift")}

    for trial in range(trials):
        rng = np.random.default_rng(300_000 + trial)
        t = int(rng.integers(1, cfg["max_t"] + 1))
        delta = int(rng.integers(1, t + 1))

        b = _random_set(rng, t)
        a = sparsify(b, t, delta)
        if not (
            a.is_delta_sparse()
            and set(a.to_list()) <= set(b)
            and is_approximation(a, b, t, delta)
            and len(a) <= 2 * ((t + delta - 1) // delta) + 2
        ):
            failures["sparsification"].append(trial)

        # transitivity on a constructed chain A ⊆ B ⊆ C with checked premises
        c = _random_set(rng, t)
        d1 = int(rng.integers(1, delta + 1))
        bb = sparsify(c, t, d1).to_list()
        aa = sparsify(bb, t, delta).to_list()
        if is_approximation(bb, c, t, delta) and is_approximation(aa, bb, t, delta):
            if not is_approximation(aa, c, t, delta):
                failures["transitivity"].append(trial)
        else:
            failures["transitivity"].append(trial)  # premises must hold by construction

        # sandwich: A ⊆ B ⊆ C, A approximates C => B does
        mid = sorted(set(aa) | {x for x in c if rng.random() < 0.4})
        if not is_approximation(mid, c, t, delta):
            failures["sandwich"].append(trial)

        # union of approximations approximates the union (no re-sparsify)
        b2 = _random_set(rng, t)
        a2 = sparsify(b2, t, delta)
        union_a = sorted(set(a.to_list()) | set(a2.to_list()))
        if not is_approximation(union_a, sorted(set(b) | set(b2)), t, delta):
            failures["union"].append(trial)

        # sumset property via naive sumsets
        lhs = naive_sumset(a.to_list(), a2.to_list(), t)
        rhs = naive_sumset(b, b2, t)
        if not is_approximation(lhs, rhs, t, delta):
            failures["sumset"].append(trial)

        # down-shift
        t_new = int(rng.integers(0, t + 1))
        if not is_approximation(
            shift_down(a, t_new), [x for x in b if x <= t_new], t_new, delta
        ):
            failures["downshift"].append(trial)

    bad = {k: v[:5] for k, v in failures.items() if v}
    report(
        3,
        not bad,
        f"6 algebra lemmas x {trials} checker trials: "
        + ("zero failures" if not bad else f"failing seeds {bad}"),
    )


def test_criterion_04_capped_sumset():
    cfg = CONFIG["capped"]
    fails = []
    for trial in range(cfg["trials"]):
        rng = np.random.default_rng(400_000 + trial)
        t = int(rng.integers(2, cfg["max_t"] + 1))
        delta = int(rng.integers(1, t + 1))
        b1, b2 = _random_set(rng, t, 40), _random_set(rng, t, 40)
        a1, a2 = sparsify(b1, t, delta), sparsify(b2, t, delta)
        out = capped_sumset(a1, a2, t, delta)
        base = naive_sumset(b1, b2, t)
        if not (
            out.is_delta_sparse()
            and set(out.to_list()) <= set(naive_sumset(a1.to_list(), a2.to_list(), t))
            and is_approximation(out, base, t, delta)
        ):
            fails.append(trial)
    report(
        4,
        not fails,
        f"capped sumset vs naive base sumset on {cfg['trials']} trials: "
        + ("zero failures" if not fails else f"failing seeds {fails[:10]}"),
    )


@pytest.fixture(scope="module")
def subsetsum_sweep():
    cfg = CONFIG["subsetsum"]
    eps_choices = [Fraction(e) for e in cfg["eps"]]
    runs = []
    for trial in range(cfg["runs"]):
        rng = np.random.default_rng(500_000 + trial)
        n = int(rng.integers(1, cfg["max_n"] + 1))
        t = int(rng.integers(8, cfg["max_t"] + 1))
        items = tuple(int(x) for x in rng.integers(1, max(2, int(t * 1.2)), size=n))
        eps = eps_choices[trial % len(eps_choices)]
        inst = SubsetSumInstance(items=items, target=t)
        res = approximate_subset_sum(inst, eps, seed=trial, confidence=cfg["confidence"])
        runs.append((trial, inst, eps, res))
    return runs


def test_criterion_05_subsetsum_soundness(subsetsum_sweep):
    bad = []
    for trial, inst, eps, res in subsetsum_sweep:
        reach = subset_sums_bitset(inst.items, inst.target)
        sound = (
            res.value <= inst.target
            and ((reach >> res.value) & 1) == 1
            and sum(res.witness) == res.value
            and not (Counter(res.witness) - Counter(inst.items))
        )
        if not sound:
            bad.append(trial)
    report(
        5,
        not bad,
        f"soundness (value realizable, witness consistent) on {len(subsetsum_sweep)} "
        f"seeded runs: " + ("100%" if not bad else f"failing seeds {bad[:10]}"),
    )


def test_criterion_06_subsetsum_completeness(subsetsum_sweep):
    cfg = CONFIG["subsetsum"]
    fails = []
    for trial, inst, eps, res in subsetsum_sweep:
        opt = bruteforce_opt(inst.items, inst.target)
        if Fraction(res.value) < min(Fraction(opt), (1 - eps) * inst.target):
            fails.append(trial)
    rate = len(fails) / len(subsetsum_sweep)
    ok = rate <= cfg["max_completeness_fail_rate"]
    report(
        6,
        ok,
        f"value >= min(OPT, (1-eps)t) at C={cfg['confidence']} on "
        f"{len(subsetsum_sweep)} runs: fail rate {rate:.4f} "
        f"(<= {cfg['max_completeness_fail_rate']}); failing seeds {fails[:20]}",
    )


def test_criterion_07_partition_guarantee():
    cfg = CONFIG["partition"]
    eps_choices = [Fraction(e) for e in cfg["eps"]]
    bad_guarantee = []
    bad_invariant = []
    for trial in range(cfg["runs"]):
        rng = np.random.default_rng(700_000 + trial)
        n = int(rng.integers(1, cfg["max_n"] + 1))
        style = ("uniform", "two-scale", "clustered")[trial % 3]
        inst = gen_instance(
            "partition", n, cfg["max_item"], density=0.5, seed=700_000 + trial, style=style
        )
        eps = eps_choices[trial % len(eps_choices)]
        res, trace = approximate_partition(inst, eps, return_trace=True)
        half = inst.sigma // 2
        opt = bruteforce_opt(inst.items, half)
        if not (
            (1 - eps) * opt <= res.value <= opt
            and sum(res.witness) == res.value
            and not (Counter(res.witness) - Counter(inst.items))
        ):
            bad_guarantee.append(trial)
        if trace is not None and trace.s_best < opt - 2 * trace.delta:
            bad_invariant.append(trial)
    ok = not bad_guarantee and not bad_invariant
    report(
        7,
        ok,
        f"(1-eps)OPT <= value <= OPT on {cfg['runs']} deterministic runs: "
        + (
            "100%, intermediate 2*delta invariant 100%"
            if ok
            else f"guarantee fails {bad_guarantee[:10]}, invariant fails {bad_invariant[:10]}"
        ),
    )


def test_criterion_08_hardness_reduction():
    cfg = CONFIG["hardness"]
    rng = np.random.default_rng(808)
    checked = 0
    bad_reduction = []
    gap_disagreements = []
    trial = 0
    while checked < cfg["instances"]:
        trial += 1
        n = int(rng.integers(1, 5))
        inst = gen_instance(
            "knapsack",
            n,
            20,
            density=float(rng.uniform(0.2, 0.95)),
            seed=800_000 + trial,
        )
        xs, t, eps = knapsack_to_gap_instance(inst)
        if len(xs) > cfg["max_padded"]:
            continue
        checked += 1
        solvable = bellman_knapsack(inst)[1]
        reach = subset_sums_bitset(xs, t)
        opt = reach.bit_length() - 1
        if solvable:
            if opt != t:
                bad_reduction.append(trial)
        else:
            if not (Fraction(opt) < (1 - eps) * t):
                bad_reduction.append(trial)
        via_gap = solve_knapsack_via_gap(
            inst, lambda X, tt, e: gap_subset_sum(X, tt, e, seed=trial)
        )
        if via_gap != solvable:
            gap_disagreements.append(trial)
    rate = len(gap_disagreements) / checked
    ok = not bad_reduction and rate <= cfg["max_agreement_fail_rate"]
    report(
        8,
        ok,
        f"reduction exact both directions on {checked} instances "
        f"({len(bad_reduction)} violations); via-gap agreement fail rate "
        f"{rate:.4f} (<= {cfg['max_agreement_fail_rate']}), "
        f"disagreeing seeds {gap_disagreements[:10]}",
    )


def test_criterion_09_scaling_trend():
    cfg = CONFIG["scaling"]
    eps_list = parse_eps_sweep(cfg["eps_sweep"])
    t0 = time.perf_counter()
    sub = bench_scaling(
        "subsetsum",
        eps_list,
        repeat=1,
        n=cfg["subsetsum_n"],
        seed=1,
        confidence=cfg["confidence"],
        engine_name="dense",
    )
    part = bench_scaling(
        "partition",
        eps_list,
        repeat=1,
        n=cfg["partition_n"],
        seed=1,
        engine_name="dense",
    )
    elapsed = time.perf_counter() - t0
    e_sub, e_part = sub["exponent"], part["exponent"]
    ok = (
        e_part <= cfg["max_partition_exponent"]
        and e_sub - e_part >= cfg["min_exponent_gap"]
        and elapsed < cfg["budget_s"]
    )
    times_sub = [r["elapsed_ms"] for r in sub["rows"]]
    times_part = [r["elapsed_ms"] for r in part["rows"]]
    report(
        9,
        ok,
        f"dense-engine scaling over {cfg['eps_sweep']}: subsetsum exponent "
        f"{e_sub:.2f}, partition exponent {e_part:.2f} "
        f"(<= {cfg['max_partition_exponent']}, gap >= {cfg['min_exponent_gap']}), "
        f"bench {elapsed:.0f}s (< {cfg['budget_s']:.0f}s); "
        f"subsetsum ms {times_sub}; partition ms {times_part}",
    )


def test_criterion_10_reconstruction():
    cfg = CONFIG["reconstruction"]
    runs = cfg["runs_per_scheme"]
    bad_sub = []
    for trial in range(runs):
        rng = np.random.default_rng(1_000_000 + trial)
        n = int(rng.integers(1, 12))
        t = int(rng.integers(8, 1500))
        items = tuple(int(x) for x in rng.integers(1, max(2, t), size=n))
        inst = SubsetSumInstance(items=items, target=t)
        res, trace = approximate_subset_sum(inst, Fraction(1, 4), seed=trial, return_trace=True)
        if trace is None:
            continue
        reach = subset_sums_bitset(items, t)
        for v in trace.result:
            w = reconstruct(trace, v)
            if sum(w) != v or (Counter(w) - Counter(items)) or not ((reach >> v) & 1):
                bad_sub.append((trial, v))
    bad_part = []
    for trial in range(runs):
        rng = np.random.default_rng(2_000_000 + trial)
        n = int(rng.integers(2, 11))
        inst = gen_instance("partition", n, 400, seed=2_000_000 + trial)
        res, trace = approximate_partition(inst, Fraction(1, 4), return_trace=True)
        if trace is None:
            continue
        sums = set(
            s for s in range(inst.sigma + 1) if (subset_sums_bitset(inst.items, inst.sigma) >> s) & 1
        )
        for s in trace.final.tolist():
            w = reconstruct_partition(trace, s)
            if not (s <= sum(w) <= s + trace.L * trace.R) or sum(w) not in sums or (
                Counter(w) - Counter(inst.items)
            ):
                bad_part.append((trial, s))
    ok = not bad_sub and not bad_part
    report(
        10,
        ok,
        f"every root-set value reconstructible on {runs} runs per scheme: "
        + ("100%" if ok else f"subsetsum fails {bad_sub[:5]}, partition fails {bad_part[:5]}"),
    )
