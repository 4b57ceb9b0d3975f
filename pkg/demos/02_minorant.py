"""The minorant rho-(n) at X = 10^6: where it is +1, 0 and negative.

An exhaustive scan confirms rho-(n) <= 1_P(n). The long-window sums then
show why positivity on average is out of reach at this scale.
"""

import math

import numpy as np

from almostprime_lab.core_arith import build_prime_table
from almostprime_lab.minorant import (MinorantParams, WindowSums, minorant_scan, rho_minus,
                                      rho_minus_array, x_grid)

params = MinorantParams(10 ** 6)
table = build_prime_table(params.n_hi)
print(f"z = {params.z:.3f}, P1 = {params.P1:.3f}, h1 = {params.h1:.0f}")

scan = minorant_scan(params, table)
print("value histogram:", scan.histogram)
print("violations:", scan.upper_violations, scan.size_violations, scan.prime_mismatches)

# A few hand-sized cases, straight from the definition.
for n in (1_000_003, 13 * 17 * 4513, 13 * 17 * 1009, 1009 * 1013):
    print(f"rho-({n}) = {rho_minus(n, params, table)}")

# Where do the -1 values sit? Mostly on products of two primes below 2 sqrt(X).
arr = rho_minus_array(params, table)
n = np.arange(params.n_lo, params.n_hi + 1)
neg = n[arr < 0]
print(f"{neg.size} negative values; the smallest are {neg[:5].tolist()}")

sums = WindowSums.build(params, table)
vals = sums.windows(x_grid(params.X, 100), params.h1)
target = params.h1 / (200 * math.log(params.P1) * params.log_X)
print(f"long-window sums: min {vals.min()}, max {vals.max()}, target {target:.1f}")
