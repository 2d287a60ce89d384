"""Probability density and spin orientation fields.

The density is ``w = Psi^dagger Psi``; the spin direction is the unit
vector along ``Psi^dagger Sigma Psi``. The ``pauli`` flag switches both to
the nonrelativistic upper spinor (radial functions at Z*alpha = 0), in which
``|psi^dagger sigma psi| = psi^dagger psi`` holds exactly.

Radii are in units of r_B / Z and densities in units of (Z / r_B)^3.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .angular import HalfInt
from .bispinor import BispinorField, BoundState, Grid, SpinParams, make_grid, special_case
from .radial import PhysicalConfig, QuantumNumbers

__all__ = [
    "ObservableField",
    "observe",
    "density",
    "spin_field",
    "rho_n",
    "hartree_shell_sum",
    "enumerate_states",
    "degeneracy_count",
    "reference_state",
    "reference_quantum_numbers",
    "REFERENCE_TAGS",
    "mirror_asymmetry",
    "field_distance",
    "pauli_deviation",
    "to_spherical",
    "to_cylindrical",
]

UNDEFINED_BELOW = 1e-300

_PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)


def _spin_density(spinor: np.ndarray) -> np.ndarray:
    """psi^dagger sigma psi for a 2-spinor array (2, ...); returns (3, ...)."""
    return np.real(np.einsum("a...,kab,b...->k...", np.conj(spinor), _PAULI, spinor))


def to_spherical(vec: np.ndarray, theta, phi) -> np.ndarray:
    """Cartesian (3, ...) components to (e_r, e_theta, e_phi) components."""
    st, ct, sp, cp = np.sin(theta), np.cos(theta), np.sin(phi), np.cos(phi)
    x, y, z = vec
    return np.stack(
        [
            st * cp * x + st * sp * y + ct * z,
            ct * cp * x + ct * sp * y - st * z,
            -sp * x + cp * y,
        ]
    )


def to_cylindrical(vec: np.ndarray, phi) -> np.ndarray:
    """Cartesian (3, ...) components to (e_rho, e_phi, e_z) components."""
    sp, cp = np.sin(phi), np.cos(phi)
    x, y, z = vec
    return np.stack([cp * x + sp * y, -sp * x + cp * y, z])


@dataclass(frozen=True, eq=False)
class ObservableField:
    """Density and spin direction sampled at points.

    ``s`` holds Cartesian components of the unit spin direction (NaN where
    the density is below ``UNDEFINED_BELOW``); ``polarization`` is
    ``|Psi^dagger Sigma Psi| / w``, which is 1 in the Pauli limit.
    """

    r: np.ndarray
    theta: np.ndarray
    phi: np.ndarray
    w: np.ndarray
    s: np.ndarray
    polarization: np.ndarray
    weights: np.ndarray | None = None

    @property
    def defined(self) -> np.ndarray:
        return self.w > UNDEFINED_BELOW

    @property
    def s_spherical(self) -> np.ndarray:
        return to_spherical(self.s, self.theta, self.phi)

    @property
    def s_cylindrical(self) -> np.ndarray:
        return to_cylindrical(self.s, self.phi)

    def total(self) -> float:
        """Integral of w over space (needs quadrature weights)."""
        if self.weights is None:
            raise ValueError("this field carries no quadrature weights")
        return float(np.sum(self.weights * self.w))

    def write_csv(self, stream, spherical: bool = True) -> None:
        """CSV with header ``r,theta,phi,w,sx,sy,sz[,sr,stheta]``; floats use 17 digits."""
        writer = csv.writer(stream, lineterminator="\n")
        header = ["r", "theta", "phi", "w", "sx", "sy", "sz"]
        if spherical:
            header += ["sr", "stheta"]
        writer.writerow(header)
        sph = self.s_spherical if spherical else None
        fmt = "%.17g"
        for i in range(self.w.size):
            row = [self.r.flat[i], self.theta.flat[i], self.phi.flat[i], self.w.flat[i]]
            row += [self.s[k].flat[i] for k in range(3)]
            if spherical:
                row += [sph[0].flat[i], sph[1].flat[i]]
            writer.writerow([fmt % v for v in row])


def _from_values(values: np.ndarray, r, theta, phi, weights=None, pauli_upper: bool = False) -> ObservableField:
    if pauli_upper:
        w = np.sum(np.abs(values) ** 2, axis=0)
        sv = _spin_density(values)
    else:
        w = np.sum(np.abs(values) ** 2, axis=0)
        sv = _spin_density(values[:2]) + _spin_density(values[2:])
    mag = np.sqrt(np.sum(sv * sv, axis=0))
    ok = w > UNDEFINED_BELOW
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(ok & (mag > 0), sv / mag, np.nan)
        pol = np.where(ok, mag / w, np.nan)
    return ObservableField(np.asarray(r), np.asarray(theta), np.asarray(phi), w, s, pol, weights)


def observe(state: BoundState, r, theta, phi, pauli: bool = False) -> ObservableField:
    """Density and spin direction of ``state`` at arbitrary points."""
    r, theta, phi = np.broadcast_arrays(np.asarray(r, float), np.asarray(theta, float), np.asarray(phi, float))
    values = state.upper_pauli(r, theta, phi) if pauli else state(r, theta, phi)
    return _from_values(values, r, theta, phi, pauli_upper=pauli)


def _state_of(field: BispinorField) -> BoundState:
    return BoundState(field.qn, field.sp, field.cfg, beta=field.beta)


def _field_observables(field: BispinorField, pauli: bool) -> ObservableField:
    g = field.grid
    if pauli:
        values = _state_of(field).upper_pauli(g.r, g.theta, g.phi)
        return _from_values(values, g.r, g.theta, g.phi, g.weights, pauli_upper=True)
    return _from_values(np.asarray(field.values), g.r, g.theta, g.phi, g.weights)


def density(field: BispinorField, pauli: bool = False) -> np.ndarray:
    """w at every grid node (exact bispinor by default, Pauli spinor on request)."""
    return _field_observables(field, pauli).w


def spin_field(field: BispinorField, pauli: bool = False) -> ObservableField:
    """Full observable field on the bispinor's grid, including spin directions."""
    return _field_observables(field, pauli)


def rho_n(n: int, r) -> np.ndarray:
    """Radial profile (2/n)^3 e^{-r_n} r_n^{2(n-1)} / (2n)! with r_n = 2r/n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rn = 2.0 * np.asarray(r, float) / n
    return (2.0 / n) ** 3 * np.exp(-rn) * rn ** (2 * (n - 1)) / math.factorial(2 * n)


def hartree_shell_sum(n: int, cfg: PhysicalConfig, r, theta, phi, pauli: bool = False) -> np.ndarray:
    """Sum of w over m_j = 1/2 .. n - 1/2 on the level j = n - 1/2."""
    if n < 1:
        raise ValueError("n must be >= 1")
    total = 0.0
    for two_mj in range(1, 2 * n, 2):
        state = BoundState(QuantumNumbers(0, n, HalfInt(two_mj), 1), SpinParams(), cfg)
        total = total + observe(state, r, theta, phi, pauli).w
    return total


def enumerate_states(n: int) -> list[QuantumNumbers]:
    """All (n_r, kappa, m_j, sigma) with n_r + kappa = n; n_r = 0 admits sigma = +1 only."""
    if n < 1:
        raise ValueError("n must be >= 1")
    states = []
    for kappa in range(n, 0, -1):
        n_r = n - kappa
        for sigma in (1, -1) if n_r > 0 else (1,):
            for two_mj in range(-(2 * kappa - 1), 2 * kappa, 2):
                states.append(QuantumNumbers(n_r, kappa, HalfInt(two_mj), sigma))
    return states


def degeneracy_count(n: int) -> int:
    return len(enumerate_states(n))


REFERENCE_TAGS = ("1s", "2s_darwin", "2p_darwin", "2_3/2_mj")


def reference_quantum_numbers(tag: str, two_mj: int = 1) -> tuple[QuantumNumbers, SpinParams]:
    """The state whose Pauli-limit observables ``reference_state(tag)`` describes."""
    mj = HalfInt(two_mj)
    if tag == "1s":
        return QuantumNumbers(0, 1, mj, 1), SpinParams()
    if tag == "2s_darwin":
        return QuantumNumbers(1, 1, mj, 1), special_case("darwin")
    if tag == "2p_darwin":
        return QuantumNumbers(1, 1, mj, -1), special_case("darwin", -1)
    if tag == "2_3/2_mj":
        return QuantumNumbers(0, 2, mj, 1), SpinParams()
    raise ValueError(f"unknown reference tag {tag!r}; expected one of {REFERENCE_TAGS}")


def reference_state(tag: str, point, two_mj: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form Pauli-limit ``(w, s)`` for the n = 1, 2 reference states.

    ``point = (r, theta, phi)`` may hold arrays; ``s`` has Cartesian
    components along the first axis.
    """
    r, theta, phi = np.broadcast_arrays(*(np.asarray(v, float) for v in point))
    sign = 1.0 if two_mj > 0 else -1.0
    ct, st = np.cos(theta), np.sin(theta)
    e_z = np.stack([np.zeros_like(r), np.zeros_like(r), np.ones_like(r)])
    e_rho = np.stack([np.cos(phi), np.sin(phi), np.zeros_like(r)])
    if tag == "1s":
        if abs(two_mj) != 1:
            raise ValueError("1s has m_j = +-1/2")
        return rho_n(1, r) / (4 * math.pi), sign * e_z
    if tag in ("2s_darwin", "2p_darwin"):
        if abs(two_mj) != 1:
            raise ValueError("the n = 2, j = 1/2 level has m_j = +-1/2")
        r2 = r  # 2r/n with n = 2
        if tag == "2s_darwin":
            return np.exp(-r2) * (1 - 0.5 * r2) ** 2 / (8 * math.pi), sign * e_z
        e_r = st * e_rho + ct * e_z
        e_t = ct * e_rho - st * e_z
        return np.exp(-r2) * r2 * r2 / (96 * math.pi), sign * (ct * e_r + st * e_t)
    if tag == "2_3/2_mj":
        if abs(two_mj) == 3:
            return 3 / (8 * math.pi) * rho_n(2, r) * st**2, sign * e_z
        if abs(two_mj) == 1:
            den = 1 + 3 * ct**2
            s = sign * ((5 * ct**2 - 1) * e_z - 2 * np.sin(2 * theta) * e_rho) / den
            return rho_n(2, r) * den / (8 * math.pi), s
        raise ValueError("the n = 2, j = 3/2 level has |m_j| in {1/2, 3/2}")
    raise ValueError(f"unknown reference tag {tag!r}; expected one of {REFERENCE_TAGS}")


def mirror_asymmetry(field: BispinorField, pauli: bool = False) -> float:
    """Relative L2 change of w under theta -> pi - theta on the field's grid.

    Gauss-Legendre nodes in cos(theta) are symmetric, so the reflection is a
    reversal of the polar index.
    """
    w = density(field, pauli).reshape(field.grid.shape)
    wt = field.grid.weights.reshape(field.grid.shape)
    diff = w - w[:, ::-1, :]
    return float(math.sqrt(np.sum(wt * diff**2) / np.sum(wt * w**2)))


def field_distance(a: BispinorField, b: BispinorField, pauli: bool = False) -> float:
    """Relative L2 distance ||w_a - w_b|| / ||w_a|| on a shared grid."""
    if not a.grid.same_as(b.grid):
        raise ValueError("field_distance needs both fields on the same grid")
    wa, wb = density(a, pauli), density(b, pauli)
    wt = a.grid.weights
    return float(math.sqrt(np.sum(wt * (wa - wb) ** 2) / np.sum(wt * wa**2)))


def pauli_deviation(state: BoundState, r, theta, phi) -> float:
    """max |w_exact - w_Pauli| / max w_Pauli over the given points."""
    exact = observe(state, r, theta, phi).w
    approx = observe(state, r, theta, phi, pauli=True).w
    return float(np.max(np.abs(exact - approx)) / np.max(approx))
