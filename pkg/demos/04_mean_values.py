"""Mean values of Dirichlet polynomials: exact, sampled, and against the bounds."""

import numpy as np

from almostprime_lab import audits
from almostprime_lab.core_arith import build_prime_table
from almostprime_lab.dirichlet import (DirichletPolynomial, hb_sparse_rhs, large_value_measure,
                                       mean_square_exact, mean_square_sampled, mvt_defect,
                                       power_polynomial)

rng = np.random.default_rng(1)
poly = DirichletPolynomial(np.arange(1, 201), rng.choice([-1.0, 1.0], 200))
T = 500.0
exact, sampled = mean_square_exact(poly, T), mean_square_sampled(poly, T)
print(f"int |A|^2 over [-{T:g}, {T:g}]: exact {exact:.6f}, Simpson {sampled:.6f}")
print(f"2T S2 = {2 * T * poly.S2:.1f}; defect / (N S2) = {mvt_defect(poly, T):.3f}")

# The coefficients of P1(s)^k are sparse and bounded by k!.
pp = power_polynomial(10.0, 3, build_prime_table(10 ** 4))
print(f"(sum over 10 < p <= 20)^3: {pp.support_size} terms, max b = {pp.max_coeff}, "
      f"sum b = {int(pp.b.sum())} = {pp.prime_count}^3")

print(f"sparse mean value bound, documented instance: {hb_sparse_rhs(10, 100, 50, 1000, 0.1, 1.0):.5f}")

lv = large_value_measure(DirichletPolynomial.dyadic(300), 2e4, 0.2)
print(f"large values: measure {lv.measure:.2f} of 4e4, ratio to T^(2 sigma) {lv.ratio:.3f}")

for audit in (audits.audit_mvt_defect, audits.audit_hb_sparse):
    res = audit(count=10)
    print(f"{res.name}: max ratio {res.max_ratio:.3g} (ceiling {res.ceiling})")
