"""The twelve acceptance criteria, one test each.

Every test records a single ``PASS/FAIL criterion N: ...`` line, shown in
the terminal summary (and immediately with ``pytest -s``).
"""

import math
import time
from contextlib import contextmanager
from fractions import Fraction as F

import numpy as np
import pytest

from almostprime_lab import audits
from almostprime_lab.buchstab import build_omega_table, omega_oracle_23
from almostprime_lab.cli import main
from almostprime_lab.core_arith import build_prime_table
from almostprime_lab.dirichlet import DirichletPolynomial, hb_sparse_rhs, mean_square_exact
from almostprime_lab.exponents import (all_intervals_exponent, cgen, jutila_sigma_threshold,
                                       typeII_feasible)
from almostprime_lab.minorant import (MinorantParams, WindowSums, buchstab_identity_residual,
                                      buchstab_residual_array, count_E2_intervals,
                                      count_E3_all_intervals, minorant_scan, x_grid)
from almostprime_lab.sieve_integrals import integral_I2, integral_I4_bound, integral_I4_direct

from conftest import ACCEPTANCE_LINES

EXP_MINUS_GAMMA = 0.5614594836


@contextmanager
def criterion(number: int, budget: float):
    """Time the block and record its verdict line; an AssertionError means FAIL."""
    state = {"detail": ""}
    t0 = time.perf_counter()
    ok = False
    try:
        yield state
        ok = True
    finally:
        dt = time.perf_counter() - t0
        ok = ok and dt < budget
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {state['detail']} ({dt:.1f} s)"
        ACCEPTANCE_LINES.append(line)
        print("\n" + line)
    assert dt < budget, f"criterion {number} took {dt:.1f} s, budget {budget} s"


def test_criterion_01_omega():
    with criterion(1, 1.0) as c:
        table = build_omega_table(20.0, 1e-4)
        u = np.linspace(2.0, 3.0, 10_001)
        err = max(abs(table(x) - omega_oracle_23(x)) for x in u)
        tail = np.abs(table(np.linspace(8.0, 20.0, 1201)) - EXP_MINUS_GAMMA).max()
        c["detail"] = f"max |omega - closed form| on [2,3] = {err:.2e}, max tail gap = {tail:.2e}"
        assert err < 1e-8 and tail < 1e-3


def test_criterion_02_I2():
    with criterion(2, 60.0) as c:
        r = integral_I2(0.0, tol=1e-4)
        c["detail"] = f"I2(0) = {r.value:.8f} +- {r.error_estimate:.1e} <= 0.99"
        assert r.value + r.error_estimate <= 0.99 and r.error_estimate < 5e-3


def test_criterion_03_I4():
    with criterion(3, 120.0) as c:
        bound = integral_I4_bound()
        r = integral_I4_direct(0.0)
        c["detail"] = (f"I4 bound = {bound} < 4/10000, I4(0) = {r.value:.6e} "
                       f"+- {r.error_estimate:.1e}")
        assert bound == F(11, 32000) and bound < F(4, 10000)
        assert r.value <= float(bound) + r.error_estimate


def test_criterion_04_buchstab_identity():
    with criterion(4, 60.0) as c:
        N = 10 ** 5
        table = build_prime_table(N)
        ws = [2, 3, 5, 10, 30]
        pairs = [(w, z) for w in ws for z in ws if w < z]
        bad = sum(int(np.count_nonzero(buchstab_residual_array(N, w, z, table))) for w, z in pairs)
        rng = np.random.default_rng(4)
        spot = rng.integers(1, N + 1, 500).tolist()
        bad_scalar = sum(buchstab_identity_residual(n, w, z, table) != 0
                         for w, z in pairs for n in spot)
        c["detail"] = (f"{bad} nonzero residuals over n <= 1e5 and {len(pairs)} (w, z) pairs; "
                       f"{bad_scalar} in the scalar spot check")
        assert bad == 0 and bad_scalar == 0


def test_criterion_05_minorant_scan(table3m):
    with criterion(5, 300.0) as c:
        r = minorant_scan(MinorantParams(10 ** 6), table3m)
        c["detail"] = (f"X = 1e6: {r.upper_violations} upper, {r.size_violations} size "
                       f"violations; {r.prime_mismatches} of {r.primes_checked} primes off")
        assert r.upper_violations == r.size_violations == r.prime_mismatches == 0


@pytest.mark.xfail(strict=True, reason="long-window sums are negative at desk scale; "
                   "see the decisions ledger")
def test_criterion_06_long_window_sums(table3m):
    with criterion(6, 300.0) as c:
        p = MinorantParams(10 ** 6)
        sums = WindowSums.build(p, table3m)
        vals = sums.windows(x_grid(p.X, 100), p.h1)
        target = p.h1 / (200 * math.log(p.P1) * p.log_X)
        c["detail"] = (f"min window sum {int(vals.min())} (max {int(vals.max())}) against "
                       f"target {target:.1f}; {int(np.count_nonzero(vals < target))}/100 below")
        assert np.all(vals >= target)


def test_criterion_07_E2():
    with criterion(7, 900.0) as c:
        X = 10 ** 8
        p = MinorantParams(X)
        table = build_prime_table(10 ** 7)
        r = count_E2_intervals(X, p, table, 10 ** 4)
        c["detail"] = (f"hit fraction {r.hit_fraction:.4f}, mean count {r.mean_count:.3f} "
                       f"vs prediction {r.predicted:.3f}")
        assert r.hit_fraction >= 0.9 and 1 / 3 <= r.mean_ratio <= 3


def test_criterion_08_E3():
    with criterion(8, 600.0) as c:
        table = build_prime_table(20_000)
        r = count_E3_all_intervals(10 ** 6, 10 ** 8, 1000, table)
        c["detail"] = f"{r.failures} empty intervals of 1000, min count {int(r.counts.min())}"
        assert r.failures == 0


def test_criterion_09_mean_square(audit_config):
    seed = audit_config["seed"]
    with criterion(9, 600.0) as c:
        gap = audits.audit_exact_vs_sampled(seed)
        T = 1234.5
        singleton = mean_square_exact(DirichletPolynomial.from_mapping({17: 1.0}), T)
        defect = audits.audit_mvt_defect(seed)
        ceiling = audit_config["ceilings"]["mvt_defect"]
        c["detail"] = (f"max relative gap {gap.max_ratio:.1e}, singleton {singleton} = 2T, "
                       f"max mvt_defect {defect.max_ratio:.3f} <= {ceiling}")
        assert gap.passed and gap.max_ratio < 1e-6
        assert singleton == 2 * T
        assert max(defect.ratios) <= ceiling


def test_criterion_10_audits(audit_config):
    seed, ceil = audit_config["seed"], audit_config["ceilings"]
    with criterion(10, 600.0) as c:
        hb = audits.audit_hb_sparse(seed)
        tw = audits.audit_twisted_moment(seed)
        im = audits.audit_improved_mvt(seed)
        val = hb_sparse_rhs(10, 100, 50, 1000, 0.1, 1.0)
        c["detail"] = (f"max ratios hb {hb.max_ratio:.3g}, twisted {tw.max_ratio:.3g}, "
                       f"improved {im.max_ratio:.3g}; documented instance {val:.5f}")
        assert max(hb.ratios) <= ceil["hb_sparse"]
        assert max(tw.ratios) <= ceil["twisted_moment"]
        assert max(im.ratios) <= ceil["improved_mvt"]
        assert abs(val - 0.128) <= 1e-3


def test_criterion_11_exponents():
    with criterion(11, 1.0) as c:
        s = F(49, 206)
        checks = {
            "jutila": jutila_sigma_threshold(F(9, 11)) == s,
            "cgen 29/13": cgen(F(1, 3), F(7, 32), 0) == F(29, 13),
            "cgen 2158/1025": cgen(F(2, 11), s, 0) == F(2158, 1025),
            "103/94": F(103, 94) < F(10999, 10000),
            "a = 11/10": typeII_feasible(s, s, F(2, 11), F(11, 10)).feasible,
            "a = 21/20": not typeII_feasible(s, s, F(2, 11), F(21, 20)).feasible,
            "31/20": all_intervals_exponent(F(11, 10)) == F(31, 20),
        }
        c["detail"] = f"{sum(checks.values())}/{len(checks)} exact checks hold"
        assert all(checks.values()), [k for k, v in checks.items() if not v]


# The CLI report behind each criterion. Criteria 2 and 3 share one report;
# criterion 4 is pure integer arithmetic with no report of its own.
REPORTS = {
    1: ["omega"],
    2: ["integrals"],
    5: ["minorant-scan"],
    6: ["window-sums"],
    7: ["count-e2"],
    8: ["count-e3"],
    9: ["mvt"],
    10: ["hb-check"],
    11: ["exponents", "--check-headline"],
}
EXTRA = [["hb-check", "--card-M", "10"], ["twisted-moment"]]


def test_criterion_12_determinism(tmp_path):
    with criterion(12, 1800.0) as c:
        differing = []
        runs = 0
        for argv in list(REPORTS.values()) + EXTRA:
            blobs = []
            for threads, fmt in (("1", "json"), ("4", "json"), ("2", "csv"), ("1", "csv")):
                out = tmp_path / f"r{runs}.{fmt}"
                runs += 1
                main(argv + ["--format", fmt, "--threads", threads, "--output", str(out)])
                blobs.append(out.read_bytes())
            if blobs[0] != blobs[1] or blobs[2] != blobs[3]:
                differing.append(argv[0])
        c["detail"] = f"{runs} report runs, differing commands: {differing or 'none'}"
        assert not differing
