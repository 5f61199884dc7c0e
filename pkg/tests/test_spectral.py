import math

import numpy as np
import pytest

from cuspcorr.coeffs import make_eigenform
from cuspcorr.errors import ContractError
from cuspcorr.spectral import (DIMENSION_ONE_WEIGHTS, large_sieve_ratio, petersson_geometric,
                               petersson_ratio_check, petersson_table, petersson_tail_bound,
                               sieve_quadratic_form)
from cuspcorr.bessel import bessel_j
from cuspcorr.util import rademacher

CMAX = 1000


def test_single_term_formula():
    pv = petersson_geometric(12, 1, 1, c_max=1)
    assert pv.value == pytest.approx(1 + 2 * math.pi * bessel_j(11, 4 * math.pi), abs=1e-14)


def test_self_convergence_in_cmax():
    for (m, n) in ((1, 1), (4, 5), (20, 20)):  # up to mn = 400
        v1 = petersson_geometric(12, m, n, c_max=1000).value
        v2 = petersson_geometric(12, m, n, c_max=2000).value
        assert abs(v1 - v2) < 1e-12


def test_tail_bound_honest():
    # the analytic tail bound dominates the observed cmax -> 2 cmax change
    for (m, n) in ((1, 1), (7, 9), (20, 20)):
        v1 = petersson_geometric(12, m, n, c_max=400).value
        v2 = petersson_geometric(12, m, n, c_max=800).value
        assert abs(v1 - v2) <= petersson_tail_bound(12, m, n, 400)


def test_ratio_checks_dimension_one():
    for k in (12, 16):
        for (m, n) in ((1, 1), (2, 2), (2, 3), (5, 7), (10, 10)):
            r1, r2 = petersson_ratio_check(k, m, n, CMAX)
            assert r1 < 1e-10
            assert r2 < 1e-8
    r1, r2 = petersson_ratio_check(12, 1, 1, CMAX)
    assert r2 < 1e-12  # |1 - lambda(1)^2|


def test_eigenvalue_recovery_value():
    # P(2,2)/P(1,1) reproduces lambda(2)^2 = (24 * 2^-5.5)^2 = 0.28125
    table = petersson_table(12, 2, CMAX)
    assert table[1, 1] / table[0, 0] == pytest.approx(0.28125, abs=1e-10)


def test_weight14_empty_space_forces_zero():
    """Dimension-zero control: empty spectral side means P14(m,n) = 0;
    the Kloosterman series must cancel the diagonal exactly."""
    table = petersson_table(14, 10, CMAX)
    assert np.abs(table).max() < 1e-8


def test_ratio_check_contract():
    with pytest.raises(ContractError):
        petersson_ratio_check(14, 2, 2)
    with pytest.raises(ContractError):
        petersson_geometric(11, 1, 1)


def test_positivity_of_sieve_form():
    q = sieve_quadratic_form(26, 50, CMAX)
    for seed in range(100):
        a = rademacher(51, seed)
        val = float(np.real(np.conj(a) @ q @ a))
        norm_sq = float(np.sum(a * a))
        assert val >= -1e-9 * norm_sq


def test_large_sieve_ratio_properties():
    # single unit entry: a positive spectral average
    a = np.zeros(51)
    a[3] = 1.0
    res = large_sieve_ratio(26, a, 50, CMAX)
    assert res["lhs"] >= 0
    # zero vector
    assert large_sieve_ratio(26, np.zeros(51), 50, CMAX)["ratio"] == 0.0
    # a recorded measurement on a random vector
    res = large_sieve_ratio(26, rademacher(51, 9), 50, CMAX)
    assert res["ratio"] <= 1.0
    with pytest.raises(ContractError):
        large_sieve_ratio(28, a, 50)


def test_multiplicativity_wide():
    for k in (12, 16):
        table = petersson_table(k, 10, CMAX)
        p11 = table[0, 0]
        for m in range(1, 11):
            for n in range(1, 11):
                r1 = abs(table[m - 1, n - 1] * p11 - table[m - 1, 0] * table[n - 1, 0])
                assert r1 < 1e-9
