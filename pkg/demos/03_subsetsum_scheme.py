"""The randomized SubsetSum approximation scheme, end to end.

Given items X and target t, the scheme returns a subset Y with
sum(Y) <= t and, with high probability, sum(Y) >= min(OPT, (1-eps)t).
Internally it maintains delta-sparse approximations of subset-sum sets
(delta = eps*t) and combines them with capped approximate sumsets
backed by tropical convolution; the witness is recovered by retracing
the recorded intermediate sets.
"""

import numpy as np

from sparsesum import SubsetSumInstance, approximate_subset_sum, subset_sums_bruteforce
from sparsesum.subsetsum import reconstruct

rng = np.random.default_rng(7)
items = tuple(int(x) for x in rng.integers(1, 900, size=12))
t = 2500
inst = SubsetSumInstance(items=items, target=t)
opt = max(subset_sums_bruteforce(items, t))
print(f"items = {list(items)}")
print(f"t = {t}, brute-force OPT = {opt}")

print(f"\n{'eps':>8} {'delta':>6} {'value':>6} {'>= min(OPT,(1-eps)t)':>22} {'witness size':>13}")
for eps in (0.5, 0.25, 0.0625, 0.015625):
    res = approximate_subset_sum(inst, eps, seed=42)
    floor_needed = min(opt, (1 - eps) * t)
    ok = res.value >= floor_needed
    print(f"{eps:>8} {res.delta:>6} {res.value:>6} {str(ok):>22} {len(res.witness):>13}")

# the trace lets us reconstruct *any* value the solver certified, not
# just the maximum
res, trace = approximate_subset_sum(inst, 0.0625, seed=42, return_trace=True)
print(f"\nsolved set has {len(trace.result)} certified subset sums; a few witnesses:")
for v in trace.result.to_list()[1:4]:
    w = reconstruct(trace, v)
    print(f"  {v:5d} = {' + '.join(map(str, w))}")

# a tiny eps*t drops to the exact bitset DP
small = SubsetSumInstance(items=(3, 5, 7), target=11)
res = approximate_subset_sum(small, 0.01)
print(f"\neps*t < 1 falls back to exact DP: value={res.value}, mode={res.mode}")
