"""Four-component bound states of the Coulomb Dirac problem.

A state is fixed by its quantum numbers (n_r, kappa, m_j, sigma) and two
spin parameters (theta, phi) that pick a member of the family of
eigenstates sharing the same energy, J^2 and J_z. Radii are in units of
r_B / Z throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .angular import HalfInt, SpinorLabel, SpinorSample, spherical_spinor
from .radial import PhysicalConfig, QuantumNumbers, RadialSolution, radial_functions, solve_radial
from .specfun import make_quadrature

__all__ = [
    "SpinParams",
    "BispinorSample",
    "BoundState",
    "Grid",
    "BispinorField",
    "SPECIAL_CASES",
    "beta_coeffs",
    "special_case",
    "assemble",
    "pauli_limit",
    "make_grid",
    "evaluate_field",
    "inner_product",
]


@dataclass(frozen=True)
class SpinParams:
    """Free spin parameters (theta, phi) of the generalized eigenstates."""

    theta: float = 0.0
    phi: float = 0.0


SPECIAL_CASES = {
    "darwin": SpinParams(0.0, 0.0),
    "jl": SpinParams(math.pi / 4, -math.pi / 4),
    "bel": SpinParams(math.pi / 4, 0.0),
}


def special_case(kind: str, sigma: int = 1) -> SpinParams:
    """Spin parameters of the Darwin, Johnson-Lippman or BEL eigenstates.

    The same (theta, phi) serves both signs of sigma; the sigma dependence
    lives entirely in :func:`beta_coeffs`.
    """
    if sigma not in (1, -1):
        raise ValueError("sigma must be +1 or -1")
    try:
        return SPECIAL_CASES[kind.lower()]
    except KeyError:
        raise ValueError(f"unknown special case {kind!r}; expected one of {sorted(SPECIAL_CASES)}") from None


def beta_coeffs(sigma: int, sp: SpinParams) -> tuple[complex, complex]:
    """Mixing coefficients (beta1, beta2); always |beta1|^2 + |beta2|^2 = 1."""
    c, s = math.cos(sp.theta), math.sin(sp.theta)
    ep, em = complex(math.cos(sp.phi), math.sin(sp.phi)), complex(math.cos(sp.phi), -math.sin(sp.phi))
    if sigma == 1:
        return ep * c, em * s
    if sigma == -1:
        return -ep * s, em * c
    raise ValueError("sigma must be +1 or -1")


@dataclass(frozen=True)
class BispinorSample:
    """Bispinor value at one point: upper spinor (c1, c2), lower spinor (c3, c4)."""

    c1: complex
    c2: complex
    c3: complex
    c4: complex

    @property
    def upper(self) -> SpinorSample:
        return SpinorSample(self.c1, self.c2)

    @property
    def lower(self) -> SpinorSample:
        return SpinorSample(self.c3, self.c4)

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3, self.c4], dtype=complex)

    @classmethod
    def from_array(cls, arr) -> "BispinorSample":
        a = np.asarray(arr, dtype=complex).reshape(4)
        return cls(*(complex(v) for v in a))


class BoundState:
    """Callable bound state ``psi(r, theta, phi) -> array of shape (4, ...)``.

    ``beta`` overrides the (theta, phi) parameterization; it is the hook used
    to build non-normalized states for fault injection.
    """

    def __init__(
        self,
        qn: QuantumNumbers,
        sp: SpinParams = SpinParams(),
        cfg: PhysicalConfig = PhysicalConfig(),
        *,
        beta: tuple[complex, complex] | None = None,
        zalpha: float | None = None,
    ):
        self.qn = qn
        self.sp = sp
        self.cfg = cfg
        self.zalpha = cfg.zalpha if zalpha is None else float(zalpha)
        self.radial: RadialSolution = solve_radial(qn.n_r, qn.kappa, self.zalpha)
        if beta is not None:
            self.beta = (complex(beta[0]), complex(beta[1]))
        elif qn.n_r == 0:
            # Only one radial pair exists; the spin parameters drop out.
            self.beta = (1.0 + 0j, 0j)
        else:
            self.beta = beta_coeffs(qn.sigma, sp)
        kappa = qn.kappa
        self.chi_plus = SpinorLabel(kappa - 1, qn.m_j, 1)
        self.chi_minus = SpinorLabel(kappa, qn.m_j, -1)

    @property
    def two_mj(self) -> int:
        return self.qn.two_mj

    @property
    def epsilon(self) -> float:
        return self.radial.epsilon

    def __call__(self, r, theta, phi) -> np.ndarray:
        r, theta, phi = np.broadcast_arrays(
            np.asarray(r, float), np.asarray(theta, float), np.asarray(phi, float)
        )
        f_plus, g_minus, f_minus, g_plus = radial_functions(self.radial, r)
        cp = spherical_spinor(self.chi_plus, theta, phi)
        b1, b2 = self.beta
        if self.qn.n_r == 0:
            up = (b1 * f_plus * cp.up, b1 * f_plus * cp.down)
            cm = spherical_spinor(self.chi_minus, theta, phi)
            down = (b1 * g_minus * cm.up, b1 * g_minus * cm.down)
        else:
            cm = spherical_spinor(self.chi_minus, theta, phi)
            up = (b1 * f_plus * cp.up + b2 * f_minus * cm.up, b1 * f_plus * cp.down + b2 * f_minus * cm.down)
            down = (b2 * g_plus * cp.up + b1 * g_minus * cm.up, b2 * g_plus * cp.down + b1 * g_minus * cm.down)
        return np.stack(np.broadcast_arrays(*up, *down)).astype(complex)

    def upper_pauli(self, r, theta, phi) -> np.ndarray:
        """Nonrelativistic upper spinor, shape (2, ...): the zalpha -> 0 radial functions."""
        nr_sol = solve_radial(self.qn.n_r, self.qn.kappa, 0.0)
        r, theta, phi = np.broadcast_arrays(
            np.asarray(r, float), np.asarray(theta, float), np.asarray(phi, float)
        )
        r_plus, _, r_minus, _ = radial_functions(nr_sol, r)
        cp = spherical_spinor(self.chi_plus, theta, phi)
        cm = spherical_spinor(self.chi_minus, theta, phi)
        b1, b2 = self.beta
        up = b1 * r_plus * cp.up + b2 * r_minus * cm.up
        down = b1 * r_plus * cp.down + b2 * r_minus * cm.down
        return np.stack(np.broadcast_arrays(up, down)).astype(complex)


def assemble(qn: QuantumNumbers, sp: SpinParams, cfg: PhysicalConfig, point) -> BispinorSample:
    """Bispinor value at ``point = (r, theta, phi)``.

    r = 0 with gamma < 1 yields infinite components (the amplitude diverges
    like r^(gamma-1)).
    """
    r, theta, phi = point
    return BispinorSample.from_array(BoundState(qn, sp, cfg)(r, theta, phi))


def pauli_limit(qn: QuantumNumbers, sp: SpinParams, cfg: PhysicalConfig, point) -> SpinorSample:
    """Nonrelativistic (Pauli) upper spinor of the state at ``point``."""
    r, theta, phi = point
    return SpinorSample.from_array(BoundState(qn, sp, cfg).upper_pauli(r, theta, phi))


@dataclass(frozen=True, eq=False)
class Grid:
    """Tensor-product quadrature grid, flattened to 1-D node arrays.

    Radial nodes follow a generalized Gauss-Laguerre rule in x = 2r/N with
    weight exponent 2 gamma, so the grid belongs to one level (n_r, kappa)
    and a given Z*alpha; ``key`` records that identity.
    """

    r: np.ndarray
    theta: np.ndarray
    phi: np.ndarray
    weights: np.ndarray
    key: tuple
    shape: tuple[int, int, int]

    def same_as(self, other: "Grid") -> bool:
        return self.key == other.key and self.shape == other.shape

    @property
    def size(self) -> int:
        return self.r.size


def make_grid(n_r: int, kappa: int, zalpha: float, counts: tuple[int, int, int] = (64, 32, 32)) -> Grid:
    """Quadrature grid integrating |psi|^2 r^2 dr dOmega exactly for level (n_r, kappa)."""
    n_rad, n_th, n_ph = (int(c) for c in counts)
    sol = solve_radial(n_r, kappa, zalpha)
    g = sol.gamma_j
    lag = make_quadrature("gen-laguerre", n_rad, 2 * g)
    x = lag.nodes
    r = 0.5 * sol.N * x
    # x^(2-2g) e^x undoes the built-in weight and supplies the r^2 Jacobian.
    w_r = (0.5 * sol.N) ** 3 * lag.weights * np.exp(x + (2 - 2 * g) * np.log(x))
    leg = make_quadrature("legendre", n_th)
    theta = np.arccos(leg.nodes)
    phi = 2 * math.pi * np.arange(n_ph) / n_ph
    w_ph = np.full(n_ph, 2 * math.pi / n_ph)
    R, T, P = np.meshgrid(r, theta, phi, indexing="ij")
    W = w_r[:, None, None] * leg.weights[None, :, None] * w_ph[None, None, :]
    arrays = [a.ravel() for a in (R, T, P, W)]
    for a in arrays:
        a.setflags(write=False)
    return Grid(*arrays, key=("laguerre-legendre-uniform", n_r, kappa, float(zalpha)), shape=(n_rad, n_th, n_ph))


@dataclass(frozen=True, eq=False)
class BispinorField:
    """Bispinor values on a grid; ``values`` has shape (4, grid.size)."""

    grid: Grid
    values: np.ndarray
    qn: QuantumNumbers
    sp: SpinParams
    cfg: PhysicalConfig
    beta: tuple[complex, complex]

    def sample(self, i: int) -> BispinorSample:
        return BispinorSample.from_array(self.values[:, i])

    def norm(self) -> float:
        return math.sqrt(inner_product(self, self).real)

    def to_json(self) -> dict:
        """JSON-ready dict: metadata plus flat per-node arrays."""
        v = self.values
        meta = {
            "n_r": self.qn.n_r,
            "kappa": self.qn.kappa,
            "two_mj": self.qn.two_mj,
            "sigma": self.qn.sigma,
            "theta": self.sp.theta,
            "phi": self.sp.phi,
            "Z": self.cfg.Z,
            "alpha": self.cfg.alpha,
            "grid": list(self.grid.shape),
        }
        data = {"r": self.grid.r.tolist(), "theta": self.grid.theta.tolist(), "phi": self.grid.phi.tolist()}
        for k in range(4):
            data[f"re_c{k + 1}"] = v[k].real.tolist()
            data[f"im_c{k + 1}"] = v[k].imag.tolist()
        data["weight"] = self.grid.weights.tolist()
        return {"meta": meta, "data": data}


def evaluate_field(
    qn: QuantumNumbers,
    sp: SpinParams = SpinParams(),
    cfg: PhysicalConfig = PhysicalConfig(),
    grid: Grid | None = None,
    *,
    counts: tuple[int, int, int] = (64, 32, 32),
    beta: tuple[complex, complex] | None = None,
) -> BispinorField:
    """Evaluate a bound state on its quadrature grid (built on demand)."""
    state = BoundState(qn, sp, cfg, beta=beta)
    if grid is None:
        grid = make_grid(qn.n_r, qn.kappa, cfg.zalpha, counts)
    values = state(grid.r, grid.theta, grid.phi)
    values.setflags(write=False)
    return BispinorField(grid, values, qn, sp, cfg, state.beta)


def inner_product(a: BispinorField, b: BispinorField) -> complex:
    """<a|b> = sum_i w_i a_i^dagger b_i; both fields must share one grid."""
    if not a.grid.same_as(b.grid):
        raise ValueError(f"grid mismatch: {a.grid.key}{a.grid.shape} vs {b.grid.key}{b.grid.shape}")
    return complex(np.sum(a.grid.weights * np.sum(np.conj(a.values) * b.values, axis=0)))
