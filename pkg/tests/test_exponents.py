import warnings
from decimal import Decimal
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from almostprime_lab.errors import DomainWarning, InvalidArgumentError
from almostprime_lab.exponents import (Q, all_intervals_exponent, cgen, fraction_str,
                                       headline_constants_check, jutila_exponents,
                                       jutila_sigma_threshold, sparsity_exponent,
                                       typeI_II_admissible, typeII_feasible,
                                       typeII_uniform_threshold)

SIG = F(49, 206)


def test_Q_parsing():
    assert Q("49/206") == SIG
    assert Q("1e-6") == F(1, 10 ** 6)
    assert Q(0.1) == F(1, 10)
    assert Q(Decimal("0.25")) == F(1, 4)
    assert Q(3) == 3
    for bad in ("x", "1/0", True, None):
        with pytest.raises(InvalidArgumentError):
            Q(bad)


@given(st.fractions())
def test_fraction_round_trip(x):
    assert Q(fraction_str(x)) == x


def test_cgen_examples():
    assert cgen(F(1, 3), F(7, 32), 0) == F(29, 13)
    assert cgen(F(2, 11), SIG, 0) == F(2158, 1025)
    assert cgen(0, F(1, 4), 0) == 2
    with pytest.raises(InvalidArgumentError):
        cgen(F(1, 3), F(1, 4), 1)


def test_cgen_domain_warning():
    with pytest.warns(DomainWarning):
        cgen(F(1, 3), F(1, 10), 0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        cgen(F(1, 3), F(1, 2), 0)


def test_cgen_monotone():
    sigmas = [F(1, 5) + F(i, 100) for i in range(31)]
    for theta in (F(1, 11), F(2, 11), F(1, 3)):
        values = [cgen(theta, s, 0) for s in sigmas]
        assert all(a >= b for a, b in zip(values, values[1:]))
        assert values[-1] == 2


def test_jutila_threshold():
    assert jutila_sigma_threshold(F(9, 11)) == SIG
    assert jutila_sigma_threshold(1) == F(7, 26)
    assert jutila_sigma_threshold(F(1, 2)) == 0
    with pytest.raises(InvalidArgumentError):
        jutila_sigma_threshold(F(7, 20))


@given(st.fractions(min_value=F(1, 2), max_value=1).filter(lambda b: b != F(7, 20)))
def test_jutila_threshold_balances(beta):
    s = jutila_sigma_threshold(beta)
    assert 1 + beta * (F(40, 7) * s - 2) == 2 * s


def test_jutila_exponents():
    e = jutila_exponents(SIG)
    assert e[0] == (2 * SIG, 0)
    assert e[1] == (F(40, 7) * SIG - 2, 1)
    assert e[2] == ((8 * SIG - 2) * 7, 1)


def test_typeII_headline():
    ok = typeII_feasible(SIG, SIG, F(2, 11), F(11, 10))
    assert ok.feasible
    bad = typeII_feasible(SIG, SIG, F(2, 11), F(21, 20))
    assert not bad.feasible and bad.branch == "none"
    assert 21 * 94 < 20 * 103


def test_typeII_boundary_sigma_half():
    v = typeII_feasible(F(1, 2), F(1, 2), F(1, 11), F(11, 10))
    assert v.degenerate and v.branch == "first"
    assert v.first_threshold == 1 / (1 - F(1, 10 ** 6))


def test_typeII_monotone_in_a():
    grid = [F(100 + i, 100) for i in range(30)]
    for theta in (F(1, 100), F(1, 11), F(2, 11)):
        flags = [typeII_feasible(SIG, SIG, theta, a).feasible for a in grid]
        assert flags == sorted(flags)


def test_typeII_validation():
    with pytest.raises(InvalidArgumentError):
        typeII_feasible(F(1, 10), SIG, F(1, 11), 2)
    with pytest.raises(InvalidArgumentError):
        typeII_feasible(SIG, SIG, F(1, 4), 2)
    with pytest.raises(InvalidArgumentError):
        typeII_feasible(SIG, SIG, F(1, 11), 0)


def test_uniform_threshold():
    assert typeII_uniform_threshold(0) == F(103, 94)
    assert F(103, 94) < F(10999, 10000)
    assert typeII_uniform_threshold("1e-6") > F(103, 94)


def test_small_helpers():
    assert all_intervals_exponent(F(11, 10)) == F(31, 20)
    assert sparsity_exponent(F(11, 10)) == F(1, 11)
    assert typeI_II_admissible(F(1, 3), F(1, 5), F(1, 100))
    assert not typeI_II_admissible(F(1, 3), F(1, 4), F(1, 100))


def test_headline_check():
    checks = headline_constants_check()
    assert len(checks) == 5 and all(c.passed for c in checks)
    assert "1030000 < 1033906" in checks[0].detail
