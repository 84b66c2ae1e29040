"""Knapsack decided through approximate subset-sum.

The reduction packs weight and value into one number per item
(x_i = w_i*M' - v_i with M' = 4nM), sets t = W*M' - V, and asks the gap
question with eps = 1/(2W): either some subset sums to exactly t
(knapsack solvable) or everything feasible stays below (1-eps)t
(unsolvable). Padding items (powers of two in weight and in negative
value) let a solution top up to exactly W and shave down to exactly V,
so the "exactly t" case is really attainable.

The strict sum(Y) <= t constraint is doing the heavy lifting: it turns
an approximate solver into an exact inequality test on huge numbers.
"""

import numpy as np

from sparsesum import KnapsackInstance, bellman_knapsack, knapsack_to_gap_instance
from sparsesum.hardness import gap_subset_sum, solve_knapsack_via_gap
from sparsesum.testkit import gen_instance, subset_sums_bitset

for goal in (13, 14):
    inst = KnapsackInstance(weights=(4, 3, 2), values=(9, 7, 4), budget=6, goal=goal)
    opt, solvable = bellman_knapsack(inst)
    print(f"knapsack: weights={inst.weights}, values={inst.values}, "
          f"W={inst.budget}, V={inst.goal}")
    print(f"  DP optimum = {opt}, solvable (opt >= V)? {solvable}")

    xs, t, eps = knapsack_to_gap_instance(inst)
    print(f"  reduction: {len(xs)} numbers (after padding), t = {t}, eps = {eps}")

    reach = subset_sums_bitset(xs, t)
    best = reach.bit_length() - 1
    verdict = "hits t exactly" if best == t else f"stays below (1-eps)t = {float((1 - eps) * t):.1f}"
    print(f"  best subset sum <= t is {best}: {verdict}\n")

print("\nagreement between the DP and the gap route on random instances:")
agree = 0
for seed in range(30):
    k = gen_instance("knapsack", int(np.random.default_rng(seed).integers(1, 6)), 15,
                     density=0.5, seed=seed)
    want = bellman_knapsack(k)[1]
    got = solve_knapsack_via_gap(k, lambda X, tt, e: gap_subset_sum(X, tt, e, seed=seed))
    agree += got == want
print(f"  {agree}/30 agree")
