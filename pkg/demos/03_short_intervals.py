"""Counting E2 and E3 numbers in short intervals.

E2: p1 p2 with p1 in (P1, 2P1], in windows of length (log x)^2.1 near 10^8.
E3: anything with three prime factors, in windows sqrt(x)(log x)^1.55.
"""

from almostprime_lab.core_arith import build_prime_table
from almostprime_lab.minorant import MinorantParams, count_E2_intervals, count_E3_all_intervals

X = 10 ** 8
r = count_E2_intervals(X, MinorantParams(X), build_prime_table(10 ** 7), 2000)
print(f"E2: {r.failures} empty windows of {r.x_grid.size}, "
      f"mean {r.mean_count:.3f} vs Mertens {r.predicted:.3f}")

r3 = count_E3_all_intervals(10 ** 6, 10 ** 7, 100, build_prime_table(5000))
print(f"E3: {r3.failures} empty windows, smallest count {r3.counts.min()}, "
      f"mean ratio to prediction {r3.mean_ratio:.3f}")

# Shrinking the E3 window shows how much room there is.
for e in (1.55, 1.0, 0.5, 0.0):
    r = count_E3_all_intervals(10 ** 6, 10 ** 7, 100, build_prime_table(5000), window_exponent=e)
    print(f"  exponent {e}: min count {r.counts.min()}")
