"""The chained quantity caps how biased any no-signaling marginal can be.

For every no-signaling distribution, each setting's outcome marginal can
differ from its cyclic shift by at most I_N in the 1/d-normalized L1
distance.  Small I_N therefore forces near-uniform marginals: the hallmark
that hidden-state models with informative marginals cannot survive.  This
script hammers the inequality with random no-signaling distributions and
also shows the local-causality contrast, whose strategies cannot push I_N
below d-1.

Run:  python demos/shift_bound_check.py
"""

import numpy as np

from cryptononlocal import (
    lhv_min_chained,
    random_no_signaling,
    substream,
    verify_shift_bound,
)

D, N, TRIALS = 3, 3, 2000

min_slack = np.inf
max_shift_seen = 0.0
largest_i_n = 0.0
for trial in range(TRIALS):
    gen = substream(2024, trial)
    mix = float(gen.uniform())
    dist = random_no_signaling(D, N, mix, gen)
    rep = verify_shift_bound(dist)
    min_slack = min(min_slack, rep.slack)
    max_shift_seen = max(max_shift_seen, rep.max_shift)
    largest_i_n = max(largest_i_n, rep.chained)

print(f"random no-signaling distributions: d={D}, N={N}, trials={TRIALS}")
print(f"largest marginal shift distance seen : {max_shift_seen:.6f}")
print(f"largest chained value seen           : {largest_i_n:.6f}")
print(f"smallest slack I_N - max shift       : {min_slack:.6f}  (never negative)")
print()

value, witness = lhv_min_chained(D, 2)
print(f"local deterministic floor at d={D}: min I_N = {value} (= d-1)")
print(f"attained e.g. by alice={list(witness.alice)}, bob={list(witness.bob)}")
print()
print(
    "Quantum chained measurements reach I_N ~ 2*gamma/N, far below d-1, so\n"
    "they violate local causality; and once I_N sinks below the model floor\n"
    "2(d-1)/d^3 they contradict informative hidden marginals as well."
)
