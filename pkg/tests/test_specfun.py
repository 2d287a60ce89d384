import math

import mpmath
import numpy as np
import pytest
from scipy.special import lpmv
from hypothesis import given, settings
from hypothesis import strategies as st

from dirac_coulomb.specfun import assoc_legendre, gamma_fn, gen_laguerre, make_quadrature


@given(st.floats(min_value=0.05, max_value=60.0))
def test_gamma_matches_mpmath(x):
    ref = float(mpmath.gamma(x))
    assert gamma_fn(x) == pytest.approx(ref, rel=1e-13)


@pytest.mark.parametrize("n", range(1, 12))
def test_gamma_integers_are_factorials(n):
    assert gamma_fn(n) == pytest.approx(math.factorial(n - 1), rel=1e-14)


def test_gamma_half():
    assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)


@pytest.mark.parametrize("bad", [0.0, -1.0, float("nan"), float("inf")])
def test_gamma_rejects_non_positive(bad):
    with pytest.raises(ValueError):
        gamma_fn(bad)


@given(
    st.integers(min_value=0, max_value=8),
    st.data(),
    st.floats(min_value=-1.0, max_value=1.0),
)
def test_assoc_legendre_unsigned_convention(l, data, x):
    m = data.draw(st.integers(min_value=-l, max_value=l))
    # P_l^{|m|} without the Condon-Shortley phase that scipy includes.
    mm = abs(m)
    ref = float(lpmv(mm, l, x)) * (-1) ** mm
    assert assoc_legendre(l, m, x) == pytest.approx(ref, rel=1e-11, abs=1e-12)


def test_assoc_legendre_vanishes_beyond_l():
    assert assoc_legendre(2, 3, 0.4) == 0.0


def test_assoc_legendre_domain():
    with pytest.raises(ValueError):
        assoc_legendre(2, 1, 1.5)
    with pytest.raises(ValueError):
        assoc_legendre(-1, 0, 0.5)


@settings(max_examples=60)
@given(
    st.integers(min_value=0, max_value=12),
    st.floats(min_value=0.0, max_value=7.0),
    st.floats(min_value=0.0, max_value=40.0),
)
def test_gen_laguerre_matches_mpmath(n, alpha, x):
    ref = float(mpmath.laguerre(n, alpha, x))
    scale = max(1.0, abs(float(mpmath.binomial(n + alpha, n))), abs(ref))
    assert abs(gen_laguerre(n, alpha, x) - ref) <= 1e-11 * scale


def test_gen_laguerre_minus_one_is_zero():
    x = np.linspace(0, 5, 7)
    assert np.all(gen_laguerre(-1, 1.3, x) == 0)
    with pytest.raises(ValueError):
        gen_laguerre(-2, 0.0, 1.0)


@pytest.mark.parametrize("order", [1, 2, 5, 16, 40])
def test_gauss_legendre_exactness(order):
    rule = make_quadrature("legendre", order)
    for k in range(2 * order):
        exact = 0.0 if k % 2 else 2.0 / (k + 1)
        assert rule.integrate(lambda x: x**k) == pytest.approx(exact, abs=1e-13)
    assert np.all(np.diff(rule.nodes) > 0)


@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.7320508, 5.9])
@pytest.mark.parametrize("order", [4, 12, 30])
def test_gen_laguerre_quadrature_moments(alpha, order):
    rule = make_quadrature("gen-laguerre", order, alpha)
    for k in range(0, 2 * order, max(1, order // 4)):
        exact = math.gamma(k + alpha + 1)
        assert rule.integrate(lambda x: x**k) == pytest.approx(exact, rel=1e-11)


def test_laguerre_alias_and_errors():
    a = make_quadrature("laguerre", 6)
    b = make_quadrature("gen-laguerre", 6, 0.0)
    np.testing.assert_allclose(a.nodes, b.nodes, rtol=1e-14)
    with pytest.raises(ValueError):
        make_quadrature("hermite", 4)
    with pytest.raises(ValueError):
        make_quadrature("legendre", 0)
    with pytest.raises(ValueError):
        make_quadrature("gen-laguerre", 4, -1.5)


@pytest.mark.parametrize("theta", [1e-9, 1e-5, math.pi - 1e-7])
def test_assoc_legendre_keeps_precision_near_poles(theta):
    c, s = math.cos(theta), math.sin(theta)
    # P_3^1 = 3/2 (5 cos^2 - 1) sin
    assert assoc_legendre(3, 1, c, s) == pytest.approx(1.5 * (5 * c * c - 1) * s, rel=1e-14)
