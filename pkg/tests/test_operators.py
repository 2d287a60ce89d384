import math

import numpy as np
import pytest

from dirac_coulomb.angular import HalfInt
from dirac_coulomb.bispinor import BispinorSample, BoundState, SpinParams, make_grid, special_case
from dirac_coulomb.operators import (
    DEFAULT_STEPS,
    OperatorHandle,
    anticommutator_norm,
    apply,
    apply_bel,
    apply_jl,
    commutator_norm,
    eigen_residual,
    generalized_invariant,
    generalized_spin_params,
    invariant_eigenvalue,
    jl_factor,
    matrix_element,
    smooth_random_bispinor,
)
from dirac_coulomb.radial import PhysicalConfig, QuantumNumbers, energy

CFG = PhysicalConfig(Z=50)
ZA = CFG.zalpha


def _state(n_r=1, kappa=1, two_mj=1, sigma=1, case="darwin"):
    return BoundState(QuantumNumbers(n_r, kappa, HalfInt(two_mj), sigma), special_case(case, sigma), CFG)


def test_handle_validation():
    assert OperatorHandle("H").fd_step == DEFAULT_STEPS["H"]
    with pytest.raises(ValueError):
        OperatorHandle("X")
    with pytest.raises(ValueError):
        OperatorHandle("H", fd_step=0.0)


def test_point_validation():
    state = _state()
    with pytest.raises(ValueError):
        apply("Jz", state, (0.0, 1.0, 0.0))
    with pytest.raises(ValueError):
        apply("Jz", state, (1.0, 4.0, 0.0))


def test_zalpha_required_for_coulomb_operators():
    def bare(r, t, p):
        return np.zeros((4,) + np.shape(r), complex)

    with pytest.raises(ValueError, match="zalpha"):
        apply("H", bare, (1.0, 1.0, 0.0))


def test_scalar_point_returns_sample():
    out = apply("Jz", _state(), (1.0, 0.7, 0.2))
    assert isinstance(out, BispinorSample)


@pytest.mark.parametrize("sigma", [1, -1])
@pytest.mark.parametrize("case", ["darwin", "jl", "bel"])
def test_hamiltonian_eigenstates(case, sigma):
    state = _state(1, 1, 1, sigma, case)
    eps = energy(1, 1, ZA)[0]
    assert eigen_residual("H", state, eps) < 1e-6


def test_jz_and_jsq_on_j_3_2():
    state = _state(1, 2, -3, -1, "jl")
    assert eigen_residual("Jz", state, -1.5) < 1e-8
    assert eigen_residual("Jsq", state, 3.75) < 1e-6


@pytest.mark.parametrize("sigma", [1, -1])
def test_invariant_eigenvalues(sigma):
    for case, kind in (("darwin", "ID"), ("jl", "IJL"), ("bel", "IBEL")):
        state = _state(1, 2, 1, sigma, case)
        value = invariant_eigenvalue(kind, 1, 2, ZA, sigma)
        assert eigen_residual(OperatorHandle(kind, zalpha=ZA), state, value) < 1e-5


def test_apply_jl_and_bel_shortcuts():
    state = _state(1, 1, 1, 1, "jl")
    point = (np.array([1.0, 2.0]), np.array([0.6, 2.0]), np.array([0.3, 0.3]))
    a = jl_factor(1, 1, ZA)
    np.testing.assert_allclose(apply_jl(state, point), ZA * a * state(*point), atol=1e-7)
    bel_state = _state(1, 1, 1, 1, "bel")
    np.testing.assert_allclose(apply_bel(bel_state, point), -ZA * a * bel_state(*point), atol=1e-6)


def test_jl_factor_vanishes_for_nodeless_levels():
    assert jl_factor(0, 3, 0.4) == 0.0
    assert 0 < jl_factor(2, 1, 0.4) < 1
    with pytest.raises(ValueError):
        invariant_eigenvalue("H", 1, 1, 0.3, 1)


def test_random_field_algebra():
    rng = np.random.default_rng(5)
    f = smooth_random_bispinor(rng, two_mj=-1, l_max=2, zalpha=0.4)
    assert anticommutator_norm("ID", "IJL", f) < 1e-5
    assert commutator_norm("H", "ID", f) < 1e-5


def test_jz_commutes_with_jsq_on_random_field():
    f = smooth_random_bispinor(np.random.default_rng(9), two_mj=3, l_max=3, zalpha=0.2)
    assert commutator_norm("Jz", "Jsq", f) < 1e-6


def test_hamiltonian_matrix_element_is_energy():
    state = _state(1, 1, 1, -1, "bel")
    grid = make_grid(1, 1, ZA, (64, 32, 1))
    # 2 pi / n_phi weighting with one azimuth integrates phi-independent densities exactly
    value = matrix_element(OperatorHandle("H", zalpha=ZA), state, state, grid)
    assert value.real == pytest.approx(energy(1, 1, ZA)[0], rel=1e-5)
    assert abs(value.imag) < 1e-6


@pytest.mark.parametrize("coeffs", [(1.0, 0.0, 0.0), (0.3, -0.8, 0.5), (0.0, 1.0, 1.0), (-0.2, 0.1, -0.9)])
@pytest.mark.parametrize("sigma", [1, -1])
def test_generalized_invariant_eigenstates(coeffs, sigma):
    sp, lam = generalized_spin_params(*coeffs, 1, 1, ZA)
    state = BoundState(QuantumNumbers(1, 1, HalfInt(1), sigma), sp, CFG)
    op = generalized_invariant(*coeffs)
    grid = make_grid(1, 1, ZA, (48, 24, 1))
    idx = (grid.r > 0.05) & (grid.r < 40) & (grid.theta > 0.05) & (grid.theta < math.pi - 0.05)
    r, t, p, w = grid.r[idx], grid.theta[idx], grid.phi[idx], grid.weights[idx]
    psi = state(r, t, p)
    res = op(state)(r, t, p) - sigma * lam * psi
    rel = math.sqrt(np.sum(w * np.sum(np.abs(res) ** 2, 0)) / np.sum(w * np.sum(np.abs(psi) ** 2, 0)))
    assert rel < 1e-5


def test_generalized_reduces_to_special_cases():
    sp, lam = generalized_spin_params(1.0, 0.0, 0.0, 1, 1, ZA)
    assert (sp.theta, lam) == pytest.approx((0.0, 1.0))
    sp, _ = generalized_spin_params(0.0, 1.0, 0.0, 1, 1, ZA)
    assert (sp.theta, sp.phi) == pytest.approx(tuple(special_case("jl").__dict__.values()))
    with pytest.raises(ValueError):
        generalized_spin_params(0.0, 1.0, 1.0, 0, 1, ZA)


def test_generalized_invariant_needs_zalpha():
    with pytest.raises(ValueError):
        generalized_invariant(1, 0, 0)(lambda r, t, p: np.zeros((4,) + np.shape(r), complex))(1.0, 1.0, 0.0)


def test_spin_params_default_is_darwin():
    assert SpinParams() == special_case("darwin")
