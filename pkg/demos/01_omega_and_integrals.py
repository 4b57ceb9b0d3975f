"""Buchstab's function and the two deficiency integrals.

Run with ``python demos/01_omega_and_integrals.py``.
"""

import numpy as np

from almostprime_lab.buchstab import build_omega_table, omega_oracle_23
from almostprime_lab.sieve_integrals import density_margin, integral_I4_bound

# omega(u) = 1/u on [1, 2] and (u omega(u))' = omega(u - 1) beyond.
table = build_omega_table(20.0, 1e-4)
for u in (1.5, 2.5, 3.0, 5.0, 10.0, 20.0):
    print(f"omega({u:>4}) = {table(u):.12f}")

# On [2, 3] there is a closed form, so the table can be checked pointwise.
u = np.linspace(2, 3, 1001)
gap = max(abs(table(x) - omega_oracle_23(x)) for x in u)
print(f"max gap to (1 + log(u - 1))/u on [2, 3]: {gap:.2e}")
print(f"omega(20) - exp(-gamma) = {table(20.0) - np.exp(-np.euler_gamma):.2e}")

# The sieve loses I2 + I4 of the primes; the rest is the density margin.
m = density_margin(0.0, 1e-6)
print(f"I2(0) = {m.I2.value:.10f} +- {m.I2.error_estimate:.1e} ({m.I2.cells} cells)")
print(f"I4(0) = {m.I4.value:.6e}, analytic majorant {integral_I4_bound()}")
print(f"margin 1 - I2 - I4 = {m.margin:.6f}, certified: {m.certified}")
