"""Tour of the (t, delta)-approximation algebra.

A set A (t,delta)-approximates a set B when A is a subset of B and
every element of B is bracketed by elements of A ∪ {t+1} at distance at
most delta. These sets are the working currency of the approximation
schemes: they stay small (delta-sparse: at most two elements per
delta-window) while remembering where every subset sum lives.
"""

import numpy as np

from sparsesum import apx_bounds, is_approximation, merge_union, shift_down, sparsify

t, delta = 60, 9
B = sorted({0, 3, 5, 11, 12, 13, 14, 29, 30, 31, 44, 58, 59, 60})
print(f"universe [0, {t}], delta = {delta}")
print(f"B             = {B}")

A = sparsify(B, t, delta)
print(f"sparsify(B)   = {A.to_list()}")
print(f"delta-sparse? {A.is_delta_sparse()}   size bound 2*ceil(t/delta)+2 = "
      f"{2 * ((t + delta - 1) // delta) + 2}")
print(f"approximates B? {is_approximation(A, B, t, delta)}")

print("\nbracketing a few points (lower, upper) in A ∪ {t+1}:")
for b in (0, 13, 31, 59):
    lo, hi = apx_bounds(b, A, t)
    print(f"  b={b:3d} -> ({lo}, {hi})  gap {hi - lo}")

# dropping an essential element breaks the bracket
A_broken = [x for x in A.to_list() if x != 29 and x != 31]
print(f"\nwithout 29/31: approximates B? {is_approximation(A_broken, B, t, delta)}")

# shifting the universe down keeps the property on the restricted base
A_low = shift_down(A, 30)
B_low = [x for x in B if x <= 30]
print(f"\nshift_down to t'=30: {A_low.to_list()}")
print(f"approximates B ∩ [0,30]? {is_approximation(A_low, B_low, 30, delta)}")

# unions of approximations approximate unions
rng = np.random.default_rng(1)
B2 = sorted({0} | {int(x) for x in rng.integers(0, t + 1, size=12)})
A2 = sparsify(B2, t, delta)
U = merge_union(A, A2, t, delta)
print(f"\nsecond set B2 = {B2}")
print(f"merge_union   = {U.to_list()}")
print(f"approximates B ∪ B2? {is_approximation(U, sorted(set(B) | set(B2)), t, delta)}")
