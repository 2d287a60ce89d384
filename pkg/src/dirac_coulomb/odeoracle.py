"""Independent numerical solution of the radial Dirac-Coulomb system.

The first-order system for (u, v), with ``f = e^{-varkappa xi} u`` and
``g = e^{-varkappa xi} v`` equal to xi times the upper and lower radial
amplitudes in Compton units ``xi = r mc / hbar``, is
integrated for a trial energy without using any closed-form spectrum or
polynomial. In ``t = ln xi`` it reads ``dy/dt = (A0 + xi A1) y``, which is
regular at the origin.

The regular solution is started at ``xi_min`` from a two-term series and
integrated outward; the decaying solution is started at ``xi_max`` along the
zero-growth eigenvector of ``A1`` and integrated inward. Eigenvalues are the
zeros of the sine of the angle between the two solutions at the matching
point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson, solve_ivp
from scipy.optimize import brentq

__all__ = [
    "BRANCHES",
    "ShootingConfig",
    "ShootingError",
    "system_matrices",
    "series_seed",
    "integrate_radial",
    "find_spectrum",
    "radial_profile",
]

BRANCHES = ("+-", "-+")


class ShootingError(RuntimeError):
    """Raised when the eigenvalue search cannot bracket the requested roots."""


@dataclass(frozen=True)
class ShootingConfig:
    """Integration and search settings.

    ``xi_max`` defaults to ``60 / varkappa`` for each trial energy. The
    energy mesh is uniform in ``nu = zalpha * eps / varkappa`` (integer
    spaced at eigenvalues) with ``steps`` points per unit of ``nu``;
    ``eps_bracket`` limits the scanned energies. ``method`` is any
    :func:`scipy.integrate.solve_ivp` explicit stepper; the 8th-order default
    needs far fewer steps than RK45 at ``rtol = 1e-10``.
    """

    xi_min: float = 1e-6
    xi_max: float | None = None
    steps: int = 4
    eps_bracket: tuple[float, float] = (1e-3, 1.0 - 1e-15)
    tol_energy: float = 1e-12
    rtol: float = 1e-10
    method: str = "DOP853"

    def __post_init__(self):
        if not 0 < self.xi_min < 1:
            raise ValueError("xi_min must lie in (0, 1)")
        if self.xi_max is not None and self.xi_max <= 1:
            raise ValueError("xi_max must exceed 1")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        lo, hi = self.eps_bracket
        if not 0 < lo < hi < 1:
            raise ValueError("eps_bracket must satisfy 0 < lo < hi < 1")
        if self.tol_energy < 1e-15:
            raise ValueError("tol_energy is below double precision")


def _check(kappa: int, zalpha: float, eps: float, branch: str):
    if branch not in BRANCHES:
        raise ValueError(f"branch must be one of {BRANCHES}")
    if kappa < 1:
        raise ValueError("kappa must be >= 1")
    if not 0 < zalpha < kappa:
        raise ValueError(f"need 0 < Z*alpha < kappa, got Z*alpha = {zalpha}, kappa = {kappa}")
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")


def system_matrices(kappa: int, zalpha: float, eps: float, branch: str):
    """(A0, A1) with ``xi dy/dxi = (A0 + xi A1) y`` for y = (u, v)."""
    vk = math.sqrt((1 - eps) * (1 + eps))
    if branch == "+-":
        a0 = np.array([[kappa, zalpha], [-zalpha, -kappa]], dtype=float)
        a1 = np.array([[vk, 1 + eps], [1 - eps, vk]])
    else:
        a0 = np.array([[-kappa, -zalpha], [zalpha, kappa]], dtype=float)
        a1 = np.array([[vk, -(1 + eps)], [-(1 - eps), vk]])
    return a0, a1


def series_seed(kappa: int, zalpha: float, eps: float, branch: str):
    """Exponent and first two series vectors: y ~ xi^gamma (c0 + c1 xi)."""
    a0, a1 = system_matrices(kappa, zalpha, eps, branch)
    gamma = math.sqrt(kappa * kappa - zalpha * zalpha)
    # (A0 - gamma) c0 = 0: take c0 orthogonal to the first row.
    row = a0[0] - np.array([gamma, 0.0])
    c0 = np.array([-row[1], row[0]])
    c0 /= np.linalg.norm(c0)
    c1 = np.linalg.solve((gamma + 1) * np.eye(2) - a0, a1 @ c0)
    return gamma, c0, c1


def _decaying_direction(a1: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eig(a1)
    k = int(np.argmin(np.abs(vals)))
    d = np.real(vecs[:, k])
    return d / np.linalg.norm(d)


def _rhs(a0, a1):
    (p00, p01), (p10, p11) = a0.tolist()
    (q00, q01), (q10, q11) = a1.tolist()
    exp = math.exp

    def f(t, y):
        xi = exp(t)
        u, v = y
        return [(p00 + xi * q00) * u + (p01 + xi * q01) * v, (p10 + xi * q10) * u + (p11 + xi * q11) * v]

    return f


def _solve(fun, t0, t1, y0, cfg: ShootingConfig, dense=False):
    sol = solve_ivp(fun, (t0, t1), y0, method=cfg.method, rtol=cfg.rtol, atol=1e-300, dense_output=dense)
    if not sol.success:
        raise ShootingError(f"integration failed: {sol.message}")
    return sol


def _matching_point(zalpha: float, eps: float) -> float:
    vk = math.sqrt((1 - eps) * (1 + eps))
    nu = zalpha * eps / vk
    return max(nu, 0.5) / vk


def _shoot(kappa, zalpha, eps, branch, cfg: ShootingConfig, dense=False):
    a0, a1 = system_matrices(kappa, zalpha, eps, branch)
    vk = math.sqrt((1 - eps) * (1 + eps))
    xi_max = cfg.xi_max if cfg.xi_max is not None else 60.0 / vk
    xi_m = min(_matching_point(zalpha, eps), 0.5 * xi_max)
    gamma, c0, c1 = series_seed(kappa, zalpha, eps, branch)
    # Only the direction of the start vector matters; amplitudes are normalized later.
    y_start = c0 + cfg.xi_min * c1
    fun = _rhs(a0, a1)
    out = _solve(fun, math.log(cfg.xi_min), math.log(xi_m), y_start, cfg, dense)
    inn = _solve(fun, math.log(xi_max), math.log(xi_m), _decaying_direction(a1), cfg, dense)
    return out, inn, gamma, xi_m, xi_max


def integrate_radial(kappa: int, zalpha: float, eps: float, branch: str = "+-", cfg: ShootingConfig = ShootingConfig()) -> float:
    """Shooting functional: sine of the angle between the regular and the
    decaying solution at the matching point. It changes sign at eigenvalues.
    """
    _check(kappa, zalpha, eps, branch)
    out, inn, *_ = _shoot(kappa, zalpha, eps, branch, cfg)
    yo, yi = out.y[:, -1], inn.y[:, -1]
    return float((yo[0] * yi[1] - yo[1] * yi[0]) / (np.linalg.norm(yo) * np.linalg.norm(yi)))


def _eps_of_nu(nu: float, zalpha: float) -> float:
    return nu / math.hypot(nu, zalpha)


def find_spectrum(
    kappa: int,
    zalpha: float,
    n_r_max: int,
    cfg: ShootingConfig = ShootingConfig(),
    branch: str = "+-",
) -> list[float]:
    """Lowest ``n_r_max + 1`` eigenvalues eps of the chosen branch, ascending.

    Scans a mesh uniform in ``nu = zalpha eps / varkappa`` and refines each
    sign change with Brent's method. The (-, +) branch has no solution at
    n_r = 0, so its first root corresponds to n_r = 1.
    """
    if branch not in BRANCHES:
        raise ValueError(f"branch must be one of {BRANCHES}")
    if not 0 < zalpha < kappa:
        raise ValueError(f"no bound states: need 0 < Z*alpha < kappa, got {zalpha}")
    lo, hi = cfg.eps_bracket
    nu_lo = zalpha * lo / math.sqrt(1 - lo * lo)
    nu_hi = zalpha * hi / math.sqrt((1 - hi) * (1 + hi))
    step = 1.0 / cfg.steps
    wanted = n_r_max + 1
    roots: list[float] = []

    def func(nu):
        return integrate_radial(kappa, zalpha, _eps_of_nu(nu, zalpha), branch, cfg)

    a = nu_lo
    fa = func(a)
    while len(roots) < wanted:
        b = a + step
        if b > nu_hi:
            raise ShootingError(
                f"found {len(roots)} of {wanted} eigenvalues below eps = {hi}; "
                "refine the mesh (more steps) or widen eps_bracket"
            )
        fb = func(b)
        if fa == 0.0:
            roots.append(a)
        elif fa * fb < 0:
            # Convert the energy tolerance to nu with d eps / d nu = zalpha^2 / (nu^2 + zalpha^2)^(3/2).
            slope = zalpha * zalpha / math.hypot(b, zalpha) ** 3
            nu_root = brentq(func, a, b, xtol=cfg.tol_energy / slope, rtol=4 * np.finfo(float).eps)
            roots.append(nu_root)
        a, fa = b, fb
    return [_eps_of_nu(nu, zalpha) for nu in roots[:wanted]]


def radial_profile(kappa: int, zalpha: float, eps: float, branch: str, xi, cfg: ShootingConfig = ShootingConfig()):
    """Numerical (f, g) = xi (F, G) at points ``xi``, normalized to int (f^2 + g^2) dxi = 1.

    The outward and inward solutions are scaled to agree at the matching
    point (by least squares over both components). Points beyond ``xi_max``
    are set to zero. The overall sign makes f positive near the origin.
    """
    _check(kappa, zalpha, eps, branch)
    xi = np.asarray(xi, dtype=float)
    out, inn, gamma, xi_m, xi_max = _shoot(kappa, zalpha, eps, branch, cfg, dense=True)
    vk = math.sqrt((1 - eps) * (1 + eps))
    yo, yi = out.y[:, -1], inn.y[:, -1]
    scale = float(yo @ yi) / float(yi @ yi)
    y = np.zeros((2,) + xi.shape)
    t = np.log(np.clip(xi, cfg.xi_min, None))
    inner = xi <= xi_m
    outer = (xi > xi_m) & (xi <= xi_max)
    if np.any(inner):
        y[:, inner] = out.sol(t[inner])
    if np.any(outer):
        y[:, outer] = scale * inn.sol(t[outer])
    # Below xi_min use the leading series term.
    tiny = xi < cfg.xi_min
    if np.any(tiny):
        y[:, tiny] = out.y[:, :1] * (xi[tiny] / cfg.xi_min) ** gamma
    fg = y * np.exp(-vk * xi)
    # Normalize with a fine log-spaced quadrature independent of the caller's points.
    grid = np.concatenate([np.geomspace(cfg.xi_min, xi_m, 4000), np.linspace(xi_m, xi_max, 8001)[1:]])
    tg = np.log(grid)
    yg = np.where(grid <= xi_m, out.sol(np.minimum(tg, math.log(xi_m))), scale * inn.sol(np.maximum(tg, math.log(xi_m))))
    dens = np.sum((yg * np.exp(-vk * grid)) ** 2, axis=0)
    n_in = 4000
    # The inner piece is integrated in t = ln xi, where the integrand is smooth.
    inner_part = simpson(dens[:n_in] * grid[:n_in], x=tg[:n_in])
    outer_part = simpson(dens[n_in - 1 :], x=grid[n_in - 1 :])
    norm = math.sqrt(inner_part + outer_part)
    sign = 1.0 if out.y[0, 0] >= 0 else -1.0
    return sign * fg[0] / norm, sign * fg[1] / norm
