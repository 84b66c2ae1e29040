"""The oracles and generators themselves: cross-checks between
independent oracles, generator determinism, and the guarantee report."""

import numpy as np
import pytest

from sparsesum.core import INFINITY, ApproxResult, subset_sums_bruteforce
from sparsesum.hardness import bellman_knapsack
from sparsesum.core import KnapsackInstance
from sparsesum.partition import exact_sumset_tree
from sparsesum.testkit import (
    bruteforce_opt,
    gen_instance,
    naive_sumset,
    subset_sums_bitset,
    verify_guarantee,
)


def test_minconv_oracles_agree():
    from sparsesum.minconv import ExtSeq, UNDEFINED
    from sparsesum.testkit import minconv_oracle, minconv_oracle_fast

    rng = np.random.default_rng(5)
    for _ in range(300):
        def mk():
            n = int(rng.integers(1, 20))
            return ExtSeq(
                [
                    UNDEFINED if rng.random() < 0.3 else int(rng.integers(-500, 500))
                    for _ in range(n)
                ]
            )

        a, b = mk(), mk()
        for use_max in (False, True):
            assert minconv_oracle(a, b, use_max) == minconv_oracle_fast(a, b, use_max)


def test_naive_sumset_examples():
    assert naive_sumset([0, 1], [0, 2], 3) == [0, 1, 2, 3]
    assert naive_sumset([5], [7], 10) == []
    assert naive_sumset([0, 4], [0, 3]) == [0, 3, 4, 7]


def test_naive_sumset_guard():
    with pytest.raises(ValueError):
        naive_sumset(range(4000), range(4000))


def test_cross_oracle_naive_vs_fft_tree():
    rng = np.random.default_rng(1)
    for trial in range(100):
        a = sorted({int(x) for x in rng.integers(0, 200, size=rng.integers(1, 30))})
        b = sorted({int(x) for x in rng.integers(0, 200, size=rng.integers(1, 30))})
        assert naive_sumset(a, b) == exact_sumset_tree([a, b]).tolist(), f"trial {trial}"


def test_bitset_oracle_vs_enumeration():
    rng = np.random.default_rng(2)
    for _ in range(100):
        n = int(rng.integers(0, 13))
        items = [int(x) for x in rng.integers(1, 80, size=n)]
        cap = int(rng.integers(1, 300))
        reach = subset_sums_bitset(items, cap)
        listed = [s for s in range(cap + 1) if (reach >> s) & 1]
        assert listed == subset_sums_bruteforce(items, cap)
        assert bruteforce_opt(items, cap) == listed[-1]


def test_bruteforce_opt_agrees_with_bellman_encoding():
    # subset-sum OPT equals knapsack opt with weights = values = items
    rng = np.random.default_rng(3)
    for _ in range(100):
        n = int(rng.integers(1, 12))
        items = tuple(int(x) for x in rng.integers(1, 60, size=n))
        t = int(rng.integers(1, 200))
        k = KnapsackInstance(weights=items, values=items, budget=t, goal=1)
        assert bruteforce_opt(items, t) == bellman_knapsack(k)[0]


def test_gen_instance_determinism_and_kinds():
    a = gen_instance("subsetsum", 10, 100, seed=1)
    b = gen_instance("subsetsum", 10, 100, seed=1)
    assert a == b
    assert gen_instance("subsetsum", 10, 100, seed=2) != a

    p = gen_instance("partition", 8, 50, seed=3)
    assert p.n == 8 and p.sigma == sum(p.items)

    k = gen_instance("knapsack", 6, 20, seed=7)
    assert k.n == 6 and k.budget >= 1 and k.goal >= 1

    for style in ("uniform", "clustered", "two-scale"):
        inst = gen_instance("subsetsum", 12, 1000, seed=4, style=style)
        assert all(1 <= x <= 1000 for x in inst.items)

    with pytest.raises(ValueError):
        gen_instance("mystery", 5, 10)
    with pytest.raises(ValueError):
        gen_instance("subsetsum", 5, 10, density=0)


def test_verify_guarantee_clauses():
    inst = gen_instance("subsetsum", 5, 30, seed=9)
    opt = bruteforce_opt(inst.items, inst.target)

    exact = ApproxResult(
        value=opt,
        witness=_witness_for(inst.items, opt),
        epsilon=0.25,
        delta=1,
        mode="approx",
    )
    report = verify_guarantee(inst, exact, 0.25, opt)
    assert report.passed
    assert report.clauses[-1].margin >= 0

    # boundary: value exactly (1-eps)*t passes when OPT = t
    t = 16
    from sparsesum.core import SubsetSumInstance

    inst2 = SubsetSumInstance(items=(12, 4), target=t)
    boundary = ApproxResult(value=12, witness=(12,), epsilon=0.25, delta=1, mode="approx")
    assert verify_guarantee(inst2, boundary, 0.25, 16).passed

    low = ApproxResult(value=4, witness=(4,), epsilon=0.25, delta=1, mode="approx")
    rep = verify_guarantee(inst2, low, 0.25, 16)
    assert not rep.passed
    assert any("min(OPT" in c.name and not c.passed for c in rep.clauses)

    # a witness that is not a sub-multiset must be flagged
    fake = ApproxResult(value=24, witness=(12, 12), epsilon=0.25, delta=1, mode="approx")
    rep = verify_guarantee(inst2, fake, 0.25, 16)
    assert any("sub-multiset" in c.name and not c.passed for c in rep.clauses)


def _witness_for(items, target):
    """Tiny exhaustive helper for test setup."""
    from itertools import combinations

    for r in range(len(items) + 1):
        for combo in combinations(items, r):
            if sum(combo) == target:
                return combo
    raise AssertionError("no witness")
