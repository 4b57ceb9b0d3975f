import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from almostprime_lab.buchstab import (EXP_MINUS_GAMMA, build_omega_table, omega,
                                      omega_oracle_23)
from almostprime_lab.errors import InvalidArgumentError, OutOfDomainError


def test_first_panel_exact(omega_table):
    assert omega(1.5, omega_table) == pytest.approx(2 / 3, abs=1e-15)
    assert omega(2.0, omega_table) == 0.5
    assert omega(1.0, omega_table) == 1.0


def test_below_one_is_zero(omega_table):
    assert omega(0.7, omega_table) == 0.0
    assert np.all(omega_table(np.array([-1.0, 0.0, 0.99])) == 0.0)


def test_closed_form_on_2_3(omega_table):
    u = np.linspace(2.0, 3.0, 2001)
    exact = np.array([omega_oracle_23(x) for x in u])
    assert np.max(np.abs(omega_table(u) - exact)) < 1e-12


def test_third_panel_against_quadrature_oracle(omega_table, oracles):
    assert omega(3.5, omega_table) == pytest.approx(oracles["omega_3_5"], abs=1e-12)


def test_limit(omega_table):
    u = np.linspace(8.0, 20.0, 1000)
    assert np.max(np.abs(omega_table(u) - EXP_MINUS_GAMMA)) < 1e-9
    assert EXP_MINUS_GAMMA == pytest.approx(0.5614594836, abs=1e-10)


def test_step_halving_is_stable(omega_table):
    fine = build_omega_table(20.0, 5e-5)
    u = np.linspace(1.0, 20.0, 777)
    assert np.max(np.abs(fine(u) - omega_table(u))) < 1e-12


def test_volterra_identity(omega_table):
    # u omega(u) = 1 + int_1^{u-1} omega
    n = omega_table.per_unit
    for u in (3.0, 4.5, 7.25, 12.0):
        i = int(round((u - 1) * n))
        j = int(round((u - 2) * n))
        assert u * omega_table.values[i] == pytest.approx(1 + omega_table.cum[j], abs=1e-13)


@given(st.floats(1.0, 19.99))
@settings(max_examples=200, deadline=None)
def test_bounds(omega_table, u):
    # omega lies in [1/2, 1] on [1, inf)
    v = omega(u, omega_table)
    assert 0.5 - 1e-12 <= v <= 1.0


def test_domain_errors(omega_table):
    with pytest.raises(OutOfDomainError):
        omega(25.0, omega_table)
    with pytest.raises(InvalidArgumentError):
        build_omega_table(1.5)
    with pytest.raises(InvalidArgumentError):
        build_omega_table(20.0, 0.5)
    with pytest.raises(InvalidArgumentError):
        omega_oracle_23(3.5)


def test_grid_contains_integers(omega_table):
    g = omega_table.grid()
    assert g[0] == 1.0 and g[-1] == pytest.approx(20.0)
    assert math.isclose(omega_table.step, 1e-4)
