import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import ellipeinc, ellipkinc

from qroc.elliptic import carlson_rd, carlson_rf, complete_k_agm, elliptic_e, elliptic_f
from qroc.errors import DomainError

xs = st.floats(-1, 1)
ks = st.floats(0, 0.999999)


@given(xs, ks)
def test_f_matches_scipy(x, k):
    ref = ellipkinc(math.asin(x), k * k)
    assert elliptic_f(x, k) == pytest.approx(ref, rel=1e-10, abs=1e-14)


@given(xs, st.floats(0, 1))
def test_e_matches_scipy(x, k):
    ref = ellipeinc(math.asin(x), k * k)
    assert elliptic_e(x, k) == pytest.approx(ref, rel=1e-10, abs=1e-14)


@given(xs)
def test_zero_modulus_is_arcsin(x):
    assert elliptic_f(x, 0.0) == pytest.approx(math.asin(x), rel=1e-14, abs=1e-15)
    assert elliptic_e(x, 0.0) == pytest.approx(math.asin(x), rel=1e-14, abs=1e-15)


@pytest.mark.parametrize("k", [0.0, 0.1, 0.5, 0.9, 0.999, 1 - 1e-9])
def test_complete_integral_agrees_with_agm(k):
    assert elliptic_f(1.0, k) == pytest.approx(complete_k_agm(k), rel=1e-10)
    assert complete_k_agm(k) == pytest.approx(float(mp.ellipk(k * k)), rel=1e-13)


@given(st.floats(0, 10), st.floats(0, 10), st.floats(1e-3, 10))
def test_carlson_against_mpmath(x, y, z):
    if x + y == 0:
        return
    assert carlson_rf(x, y, z) == pytest.approx(float(mp.elliprf(x, y, z)), rel=1e-12)
    assert carlson_rd(x, y, z) == pytest.approx(float(mp.elliprd(x, y, z)), rel=1e-12)


def test_odd_symmetry():
    assert elliptic_f(-0.3, 0.6) == -elliptic_f(0.3, 0.6)
    assert elliptic_e(-0.3, 0.6) == -elliptic_e(0.3, 0.6)


@pytest.mark.parametrize("args", [(1.1, 0.5), (0.5, -0.1), (0.5, 1.2)])
def test_domain_errors(args):
    with pytest.raises(DomainError):
        elliptic_f(*args)
    with pytest.raises(DomainError):
        elliptic_e(*args)


def test_divergent_corner():
    with pytest.raises(DomainError):
        elliptic_f(1.0, 1.0)
    assert elliptic_e(1.0, 1.0) == 1.0
    with pytest.raises(DomainError):
        complete_k_agm(1.0)
    with pytest.raises(DomainError):
        carlson_rf(0, 0, 1)
    with pytest.raises(DomainError):
        carlson_rd(1, 1, 0)


def test_vectorised_oracle_grid():
    x = np.linspace(-1, 1, 41)
    for k in (0.2, 0.7, 0.95):
        ours = np.array([elliptic_e(xi, k) for xi in x])
        np.testing.assert_allclose(ours, ellipeinc(np.arcsin(x), k * k), rtol=1e-10, atol=1e-14)
