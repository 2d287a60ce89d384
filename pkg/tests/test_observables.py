import io
import math

import numpy as np
import pytest

from dirac_coulomb.angular import HalfInt
from dirac_coulomb.bispinor import BoundState, SpinParams, evaluate_field, make_grid, special_case
from dirac_coulomb.observables import (
    REFERENCE_TAGS,
    degeneracy_count,
    density,
    enumerate_states,
    field_distance,
    hartree_shell_sum,
    mirror_asymmetry,
    observe,
    reference_quantum_numbers,
    reference_state,
    rho_n,
    spin_field,
    to_cylindrical,
    to_spherical,
)
from dirac_coulomb.radial import PhysicalConfig, QuantumNumbers

CFG = PhysicalConfig(Z=1)


def _points():
    r = np.linspace(0.2, 12, 15)
    t = np.linspace(0.1, math.pi - 0.1, 13)
    R, T = np.meshgrid(r, t, indexing="ij")
    return R, T, np.full_like(R, 0.9)


def test_density_integrates_to_one():
    qn = QuantumNumbers(1, 2, HalfInt(1), -1)
    field = evaluate_field(qn, SpinParams(0.4, 1.0), PhysicalConfig(Z=40), counts=(40, 16, 2))
    assert spin_field(field).total() == pytest.approx(1.0, abs=1e-10)
    assert density(field).shape == (field.grid.size,)


def test_total_needs_weights():
    obs = observe(BoundState(QuantumNumbers(0, 1, HalfInt(1))), 1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        obs.total()


def test_pauli_spin_is_fully_polarized_and_exact_is_not():
    state = BoundState(QuantumNumbers(1, 1, HalfInt(1), 1), special_case("jl"), PhysicalConfig(Z=60))
    R, T, P = _points()
    pauli = observe(state, R, T, P, pauli=True)
    exact = observe(state, R, T, P)
    np.testing.assert_allclose(pauli.polarization, 1.0, atol=1e-13)
    assert np.nanmin(exact.polarization) < 1 - 1e-4
    np.testing.assert_allclose(np.linalg.norm(exact.s, axis=0), 1.0, atol=1e-13)


@pytest.mark.parametrize("pauli", [True, False])
@pytest.mark.parametrize("case", ["darwin", "jl", "bel"])
def test_opposite_mj_is_mirror_image(case, pauli):
    R, T, P = _points()
    cfg = PhysicalConfig(Z=40)

    def obs(two_mj, theta):
        return observe(BoundState(QuantumNumbers(1, 1, HalfInt(two_mj), 1), special_case(case), cfg), R, theta, P, pauli)

    a, b, mirrored = obs(1, T), obs(-1, T), obs(-1, math.pi - T)
    np.testing.assert_allclose(mirrored.w, a.w, atol=1e-12 * a.w.max())
    if case != "jl":
        np.testing.assert_allclose(b.w, a.w, atol=1e-12 * a.w.max())
        np.testing.assert_allclose(b.s[2], -a.s[2], atol=1e-12)


def test_reference_tags_and_errors():
    assert REFERENCE_TAGS == ("1s", "2s_darwin", "2p_darwin", "2_3/2_mj")
    with pytest.raises(ValueError):
        reference_state("3d", (1.0, 1.0, 0.0))
    with pytest.raises(ValueError):
        reference_state("2_3/2_mj", (1.0, 1.0, 0.0), two_mj=5)
    with pytest.raises(ValueError):
        reference_quantum_numbers("nope")


def test_reference_1s_density_closed_form():
    w, s = reference_state("1s", (1.0, 0.3, 0.0))
    assert w == pytest.approx(math.exp(-2) / math.pi, rel=1e-14)
    np.testing.assert_array_equal(s, [0.0, 0.0, 1.0])


def test_rho_n_normalization():
    r = np.linspace(0, 200, 200001)
    for n in (1, 2, 3):
        assert np.trapezoid(rho_n(n, r) * r * r, r) == pytest.approx(1.0, rel=1e-6)
    with pytest.raises(ValueError):
        rho_n(0, 1.0)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_shell_sum_is_n_rho_over_4pi(n):
    R, T, P = _points()
    total = hartree_shell_sum(n, CFG, R, T, P, pauli=True)
    np.testing.assert_allclose(total, n * rho_n(n, R) / (4 * math.pi), rtol=1e-12)


def test_enumeration_contents():
    states = enumerate_states(2)
    assert len(states) == 8 == degeneracy_count(2)
    assert {(q.n_r, q.kappa) for q in states} == {(1, 1), (0, 2)}
    with pytest.raises(ValueError):
        enumerate_states(0)


def test_generic_spin_params_break_mirror_symmetry():
    grid = make_grid(1, 1, CFG.zalpha, (48, 24, 2))
    qn = QuantumNumbers(1, 1, HalfInt(1), 1)
    generic = evaluate_field(qn, SpinParams(0.7, 0.3), CFG, grid)
    darwin = evaluate_field(qn, special_case("darwin"), CFG, grid)
    assert mirror_asymmetry(generic) > 1e-3
    assert mirror_asymmetry(darwin) < 1e-12
    assert field_distance(generic, darwin) > 1e-3


def test_field_distance_requires_shared_grid():
    a = evaluate_field(QuantumNumbers(1, 1, HalfInt(1), 1), counts=(8, 4, 2))
    b = evaluate_field(QuantumNumbers(0, 2, HalfInt(1), 1), counts=(8, 4, 2))
    with pytest.raises(ValueError):
        field_distance(a, b)
    assert field_distance(a, a) == 0.0


def test_frame_conversions_preserve_length():
    rng = np.random.default_rng(2)
    v = rng.normal(size=(3, 10))
    t, p = rng.uniform(0, math.pi, 10), rng.uniform(0, 2 * math.pi, 10)
    np.testing.assert_allclose(np.linalg.norm(to_spherical(v, t, p), axis=0), np.linalg.norm(v, axis=0))
    np.testing.assert_allclose(np.linalg.norm(to_cylindrical(v, p), axis=0), np.linalg.norm(v, axis=0))
    # e_r at the north pole is e_z
    np.testing.assert_allclose(to_spherical(np.array([0.0, 0.0, 1.0]), 0.0, 0.0), [1.0, 0.0, 0.0], atol=1e-15)


def test_csv_output_format():
    obs = observe(BoundState(QuantumNumbers(0, 1, HalfInt(1))), np.array([1.0, 2.0]), np.array([0.5, 1.0]), np.zeros(2))
    buf = io.StringIO()
    obs.write_csv(buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "r,theta,phi,w,sx,sy,sz,sr,stheta"
    assert len(lines) == 3
    assert float(lines[1].split(",")[3]) == obs.w[0]
