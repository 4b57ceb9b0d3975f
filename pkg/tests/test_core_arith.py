import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from almostprime_lab.core_arith import (build_prime_table, big_omega_array, divisor_function,
                                        divisor_function_array, factorize, is_Ek,
                                        largest_prime_factor_array, segmented_big_omega,
                                        segmented_primes, shiu_ratio, simple_primes,
                                        smooth_count)
from almostprime_lab.errors import InvalidArgumentError, ResourceLimitError


def trial_factor(n):
    out, p = [], 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def brute_dk(n, k):
    if k == 1:
        return 1
    return sum(brute_dk(n // d, k - 1) for d in range(1, n + 1) if n % d == 0)


def test_spf_small():
    t = build_prime_table(10)
    assert t.spf.tolist() == [0, 0, 2, 3, 2, 5, 2, 7, 2, 3, 2]


def test_table_is_read_only(small_table):
    with pytest.raises(ValueError):
        small_table.spf[5] = 1


def test_prime_counts(small_table):
    assert small_table.prime_count(100) == 25
    assert small_table.prime_count(100_000) == 9592
    assert small_table.primes(20, 40).tolist() == [23, 29, 31, 37]


def test_pi_million():
    t = build_prime_table(1_000_000)
    assert t.prime_count() == 78498
    assert np.array_equal(t.primes(), segmented_primes(2, 1_000_001, segment=65536))


def test_limits():
    with pytest.raises(InvalidArgumentError):
        build_prime_table(1)
    with pytest.raises(ResourceLimitError):
        build_prime_table(10 ** 6, ceiling=1000)


def test_segmented_primes_window():
    assert segmented_primes(90, 110).tolist() == [97, 101, 103, 107, 109]
    assert segmented_primes(10, 10).size == 0


@given(st.integers(1, 200_000))
@settings(max_examples=300, deadline=None)
def test_factorize_matches_trial_division(small_table, n):
    f = factorize(n, small_table)
    assert f.factors == trial_factor(n)
    assert f.value() == n


def test_factorize_example(small_table):
    f = factorize(2021, small_table)
    assert f.factors == ((43, 1), (47, 1))
    assert f.big_omega == 2 and f.small_omega == 2
    with pytest.raises(InvalidArgumentError):
        factorize(0, small_table)


def test_is_Ek(small_table):
    assert is_Ek(12, 3, small_table)
    assert not is_Ek(12, 3, small_table, distinct=True)
    assert is_Ek(12, 2, small_table, distinct=True)
    assert is_Ek(1, 0, small_table)


@given(st.integers(1, 400), st.integers(1, 4))
@settings(max_examples=100, deadline=None)
def test_divisor_function_brute(small_table, n, k):
    assert divisor_function(n, k, small_table) == brute_dk(n, k)


def test_divisor_examples(small_table):
    assert divisor_function(12, 2, small_table) == 6
    assert divisor_function(4, 3, small_table) == 6
    arr = divisor_function_array(1000, 3, small_table)
    assert arr[0] == 0
    assert all(arr[n] == divisor_function(n, 3, small_table) for n in range(1, 1001))


def test_divisor_array_large_k_is_exact(small_table):
    arr = divisor_function_array(4096, 4, small_table)
    assert arr[4096] == math.comb(12 + 3, 3)


def test_big_omega_and_lpf(small_table):
    om = big_omega_array(5000, small_table)
    lpf = largest_prime_factor_array(5000, small_table)
    for n in range(2, 5001):
        f = trial_factor(n)
        assert om[n] == sum(e for _, e in f)
        assert lpf[n] == f[-1][0]
    assert lpf[1] == 1 and lpf[0] == 0


def test_segmented_big_omega_matches_table(small_table):
    lo, hi = 150_000, 200_000
    seg = segmented_big_omega(lo, hi)
    full = big_omega_array(hi - 1, small_table)[lo:hi]
    assert np.array_equal(seg, full)


def test_smooth_count():
    t = build_prime_table(1000)
    assert smooth_count(10, 2, t) == 4  # 1, 2, 4, 8
    assert smooth_count(100, 3, t) == 20
    assert smooth_count(1000, 1000, t) == 1000


def test_shiu_ratio_bounded(small_table):
    r4 = shiu_ratio(10 ** 4, 2, 2, 2, 1, small_table)
    r5 = shiu_ratio(10 ** 5, 2, 2, 2, 1, small_table)
    assert 0 < r5 < 2 * r4
    with pytest.raises(InvalidArgumentError):
        shiu_ratio(50, 2, 1, 2, 1, small_table)


def test_simple_primes():
    assert simple_primes(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert simple_primes(1).size == 0
