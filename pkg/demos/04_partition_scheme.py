"""The deterministic Partition approximation scheme.

Partition asks for a subset as close to half the total as possible.
The scheme is deterministic: (1-eps)*OPT <= sum(Y') <= OPT on every
input, no seeds involved. It balances two halves of work through the
part count L: each of the <= L parts gets a sparse approximation of its
subset sums (convolution work that grows as L shrinks), and the parts
are then combined exactly by FFT sumsets on values rounded down by
R = delta/L (FFT length grows with L). L = ceil(eps^-1/2) balances the
two; the run is correct for any 1 <= L <= 1/eps.
"""

import time

import numpy as np

from sparsesum import PartitionInstance, approximate_partition
from sparsesum.testkit import bruteforce_opt

rng = np.random.default_rng(11)
items = tuple(int(x) for x in rng.integers(1, 5000, size=14))
inst = PartitionInstance(items=items)
half = inst.sigma // 2
opt = bruteforce_opt(items, half)
print(f"items = {list(items)}")
print(f"sigma = {inst.sigma}, floor(sigma/2) = {half}, OPT = {opt}")

print(f"\n{'eps':>10} {'value':>7} {'OPT-value':>9} {'(1-eps)*OPT':>12}  guarantee")
for eps in (0.5, 0.25, 0.0625, 0.015625, 0.00390625):
    res = approximate_partition(inst, eps)
    lo = (1 - eps) * opt
    ok = lo <= res.value <= opt
    print(f"{eps:>10} {res.value:>7} {opt - res.value:>9} {lo:>12.1f}  {'holds' if ok else 'BROKEN'}")

print("\nsame input, same output, every time:")
a = approximate_partition(inst, 0.0625)
b = approximate_partition(inst, 0.0625)
print(f"  run 1 value={a.value}, run 2 value={b.value}, witnesses equal: {a.witness == b.witness}")

# the L knob trades convolution work against FFT length
print(f"\n{'L':>4} {'value':>7} {'elapsed_ms':>11}")
for L in (1, 2, 4, 8, 16):
    t0 = time.perf_counter()
    res = approximate_partition(inst, 0.0625, L=L)
    ms = (time.perf_counter() - t0) * 1e3
    print(f"{L:>4} {res.value:>7} {ms:>11.2f}")

# one item above sigma/2 makes the answer immediate and exact
lop = PartitionInstance(items=(1000, 3, 4, 5))
res = approximate_partition(lop, 0.25)
print(f"\noversized item: value={res.value} (= sigma - max), mode={res.mode}")
