import math

import numpy as np
import pytest

from cuspcorr.coeffs import Eigenform, make_eigenform
from cuspcorr.errors import ContractError, InsufficientCoefficients
from cuspcorr.voronoi import VoronoiInstance, voronoi_check, voronoi_instance, voronoi_lhs, voronoi_rhs
from cuspcorr.windows import SmoothWindow, bump_window


def zero_window():
    return SmoothWindow(lambda x: np.zeros_like(np.asarray(x, dtype=float)), None, (1.0, 2.0))


def test_contracts():
    with pytest.raises(ContractError):
        voronoi_instance(12, 2, 4, 50.0)  # gcd(b,c) != 1
    with pytest.raises(ContractError):
        voronoi_instance(12, 1, 0, 50.0)
    with pytest.raises(ContractError):
        voronoi_instance(12, 1, 2, -1.0)


def test_zero_window_both_sides():
    inst = voronoi_instance(12, 1, 2, 50.0, V=zero_window())
    assert voronoi_lhs(inst) == 0
    val, diag = voronoi_rhs(inst)
    assert val == 0


def test_lhs_periodicity_in_b():
    i1 = voronoi_instance(12, 1, 3, 60.0)
    i2 = voronoi_instance(12, 4, 3, 60.0)
    assert voronoi_lhs(i1) == pytest.approx(voronoi_lhs(i2), abs=1e-14)


def test_lhs_against_reversed_order_sum(form12):
    inst = VoronoiInstance(form=form12, b=1, c=1, N=50.0)
    val = voronoi_lhs(inst)
    W = inst.V
    acc = 0.0
    for n in range(100, 49, -1):  # reversed order, Kahan-free but fsum
        acc += float(form12.lam[n] * W.value(n / 50.0))
    assert val.real == pytest.approx(acc, abs=1e-12)
    assert val.imag == 0


def test_identity_grid():
    for weight in (12, 16):
        for (b, c) in ((1, 1), (1, 2), (1, 3), (2, 5)):
            for N in (50.0, 200.0):
                res = voronoi_check(voronoi_instance(weight, b, c, N))
                assert res["relative_error"] < 1e-6, (weight, b, c, N, res["relative_error"])


def test_conjugation_symmetry():
    a = voronoi_check(voronoi_instance(12, 1, 5, 80.0))
    b = voronoi_check(voronoi_instance(12, -1, 5, 80.0))
    assert a["lhs"] == pytest.approx(np.conj(b["lhs"]), abs=1e-12)
    assert a["rhs"] == pytest.approx(np.conj(b["rhs"]), abs=1e-9)


def test_truncation_doubling_stability():
    base = voronoi_instance(12, 1, 3, 50.0)
    _, diag = voronoi_rhs(base)
    n0 = diag["n_stop"]
    v1, _ = voronoi_rhs(voronoi_instance(12, 1, 3, 50.0, rhs_truncation=n0))
    v2, _ = voronoi_rhs(voronoi_instance(12, 1, 3, 50.0, rhs_truncation=2 * n0))
    assert abs(v1 - v2) < 1e-8


def test_custom_form_insufficient_raises():
    small = make_eigenform(12, 32)
    custom = Eigenform(weight=12, a=list(small.a[:33]), lam=small.lam[:33].copy())
    inst = VoronoiInstance(form=custom, b=1, c=3, N=12.0)
    with pytest.raises(InsufficientCoefficients):
        voronoi_rhs(inst)


def test_dual_term_small_argument_scaling(form12):
    # below the oscillatory regime the dual integral scales like A^(kappa-1)
    from cuspcorr.bessel import BesselKernel
    from cuspcorr.voronoi import _dual_integral
    kern = BesselKernel.of(11)
    W = bump_window()
    i1 = complex(_dual_integral(kern, W, 0.02, 1e-12))
    i2 = complex(_dual_integral(kern, W, 0.04, 1e-12))
    ratio = abs(i2) / abs(i1)
    assert ratio == pytest.approx(2 ** 11, rel=0.02)
