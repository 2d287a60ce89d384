import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from dirac_coulomb.angular import HalfInt
from dirac_coulomb.radial import (
    FINE_STRUCTURE,
    PhysicalConfig,
    QuantumNumbers,
    coeffs_by_recurrence,
    energy,
    fine_structure,
    gamma_j,
    normalization_constant,
    polynomials_laguerre,
    radial_functions,
    solve_radial,
)
from dirac_coulomb.specfun import gamma_fn


def test_config_validation():
    assert PhysicalConfig(Z=2).zalpha == pytest.approx(2 * FINE_STRUCTURE)
    for bad in ({"Z": 0}, {"Z": -1}, {"alpha": 0}, {"Z": float("nan")}):
        with pytest.raises(ValueError):
            PhysicalConfig(**bad)


def test_quantum_number_validation():
    qn = QuantumNumbers.from_n(3, 2, -3, -1)
    assert (qn.n_r, qn.n, qn.j, qn.two_mj) == (1, 3, 1.5, -3)
    with pytest.raises(ValueError):
        QuantumNumbers(0, 1, HalfInt(1), -1)  # n_r = 0 needs sigma = +
    with pytest.raises(ValueError):
        QuantumNumbers(1, 1, HalfInt(3), 1)  # |m_j| > j
    with pytest.raises(ValueError):
        QuantumNumbers(-1, 1, HalfInt(1), 1)
    with pytest.raises(ValueError):
        QuantumNumbers.from_n(2, 3, 1)


@given(st.integers(0, 8), st.integers(1, 5), st.floats(1e-4, 0.99))
def test_energy_identities(n_r, kappa, za):
    eps, vk, big_n = energy(n_r, kappa, za)
    assert eps * eps + vk * vk == pytest.approx(1.0, rel=1e-14)
    assert vk == pytest.approx(za / big_n, rel=1e-14)
    assert 0 < eps < 1
    delta, eps2 = fine_structure(n_r + kappa, kappa, za)
    assert eps2 == pytest.approx(eps, rel=1e-14)
    assert delta == pytest.approx(kappa - gamma_j(kappa, za), rel=1e-9, abs=1e-15)


def test_energy_is_sommerfeld_formula():
    za = 0.3
    for n_r in range(4):
        for kappa in range(1, 4):
            ref = 1 / math.sqrt(1 + za**2 / (n_r + math.sqrt(kappa**2 - za**2)) ** 2)
            assert energy(n_r, kappa, za)[0] == pytest.approx(ref, rel=1e-15)


def test_larger_j_lies_higher_within_a_shell():
    za = 0.2
    e_2_half = energy(1, 1, za)[0]
    e_2_3half = energy(0, 2, za)[0]
    assert e_2_3half > e_2_half


def test_zalpha_domain():
    with pytest.raises(ValueError):
        gamma_j(1, 1.0)
    with pytest.raises(ValueError):
        gamma_j(2, -0.1)
    assert gamma_j(1, 0.0) == 1.0


def test_recurrence_needs_positive_zalpha():
    with pytest.raises(ValueError):
        coeffs_by_recurrence(1, 1, 0.0)


def test_recurrence_terminates():
    cs = coeffs_by_recurrence(3, 2, 0.4, length=8)
    for arr in (cs.b_plus, cs.d_minus, cs.b_minus, cs.d_plus):
        assert np.all(arr[4:] == 0) and arr[3] != 0


def test_recurrence_n_r_zero_has_single_pair():
    cs = coeffs_by_recurrence(0, 2, 0.4)
    assert cs.b_plus[0] == 1 and np.all(cs.b_minus == 0) and np.all(cs.d_plus == 0)


def test_normalization_constant_n_r_zero():
    # n_r = 0, kappa = 1: C^2 = (1 + eps) / (2 Gamma(1 + 2 gamma))
    za = 0.3
    eps = energy(0, 1, za)[0]
    g = gamma_j(1, za)
    assert normalization_constant(0, 1, za) == pytest.approx(math.sqrt((1 + eps) / (2 * gamma_fn(1 + 2 * g))), rel=1e-14)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 4), st.integers(1, 3), st.floats(0.01, 0.9))
def test_radial_pairs_are_normalized(n_r, kappa, za):
    if za >= kappa:
        za = 0.5
    sol = solve_radial(n_r, kappa, za)

    def dens(r, pair):
        f = radial_functions(sol, r)
        return (f[2 * pair] ** 2 + f[2 * pair + 1] ** 2) * r * r

    top = 40 * sol.N + 40
    for pair in (0, 1) if n_r > 0 else (0,):
        val = quad(dens, 0, top, args=(pair,), limit=400, epsabs=1e-13, epsrel=1e-12)[0]
        assert val == pytest.approx(1.0, abs=1e-9)


def test_pauli_limit_radial_functions():
    # Z*alpha = 0: F+ for n_r = 0, kappa = 1 is the hydrogen 1s radial function 2 e^{-r}.
    sol = solve_radial(0, 1, 0.0)
    r = np.linspace(0.1, 8, 9)
    f_plus, g_minus, *_ = radial_functions(sol, r)
    np.testing.assert_allclose(f_plus, 2 * np.exp(-r), rtol=1e-14)
    np.testing.assert_allclose(g_minus, 0, atol=0)


def test_radial_functions_at_origin():
    sol = solve_radial(0, 1, 0.3)
    f_plus, _, f_minus, g_plus = radial_functions(sol, 0.0)
    assert math.isinf(f_plus)
    assert f_minus == 0 and g_plus == 0
    with pytest.raises(ValueError):
        radial_functions(sol, -1.0)


def test_laguerre_polynomials_reduce_for_n_r_zero():
    p_plus, q_minus, p_minus, q_plus = polynomials_laguerre(0, 2, 0.5, np.array([0.0, 1.0, 3.0]))
    np.testing.assert_array_equal(p_plus, 1.0)
    np.testing.assert_array_equal(q_minus, 1.0)
    np.testing.assert_array_equal(p_minus, 0.0)
