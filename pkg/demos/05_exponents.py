"""Exact exponent bookkeeping with rationals."""

from fractions import Fraction as F

from almostprime_lab.exponents import (cgen, headline_constants_check, jutila_sigma_threshold,
                                       typeII_feasible, typeII_uniform_threshold)

sigma = jutila_sigma_threshold(F(9, 11))
print("large-values sigma at N = T^(9/11):", sigma)
print("interval exponents:", cgen(F(1, 3), F(7, 32), 0), cgen(F(2, 11), sigma, 0))

# The type II argument closes once a passes 103/94; 11/10 is just above it.
print("uniform threshold:", typeII_uniform_threshold(0), float(typeII_uniform_threshold(0)))
for a in (F(21, 20), F(11, 10)):
    v = typeII_feasible(sigma, sigma, F(2, 11), a)
    print(f"a = {a}: feasible {v.feasible} via {v.branch} branch")

for check in headline_constants_check():
    print(f"[{'ok' if check.passed else 'FAIL'}] {check.name}: {check.detail}")
