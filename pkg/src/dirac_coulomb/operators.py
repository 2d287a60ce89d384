"""Numerical action of H, J_z, J^2 and the invariants I_D, I_JL, I_BEL.

Operators act lazily: applying one to a bispinor function returns another
bispinor function, so compositions such as the commutator defining I_BEL
are evaluated by nesting finite-difference stencils. Units are
hbar = m = c = 1, e^2 = alpha, and radii are in units of r_B / Z, so that

    H = [[1 - za^2/r, za sigma.p], [za sigma.p, -1 - za^2/r]],   za = Z alpha,

with ``sigma.p = -i sigma.grad`` taken in the scaled radius.

Radial derivatives use 5-point stencils with step ``h * r``; polar
derivatives use step ``h * min(1, theta, pi - theta)``. Functions that carry
an integer ``two_mj`` attribute have components proportional to
``e^{i m1 phi}`` (components 1, 3) and ``e^{i m2 phi}`` (components 2, 4);
their azimuthal derivatives are taken exactly. Every operator here preserves
that structure, so composed results keep the exact phi-derivative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .angular import POLE_EPS, lambda_action, sigma_r_matrix, spinor_function, SpinorLabel, HalfInt
from .bispinor import BispinorField, BispinorSample, BoundState

__all__ = [
    "OPERATOR_KINDS",
    "DEFAULT_STEPS",
    "COMPOSED_STEP",
    "BispinorFunction",
    "OperatorHandle",
    "apply",
    "apply_jl",
    "apply_bel",
    "eigen_residual",
    "anticommutator_norm",
    "commutator_norm",
    "matrix_element",
    "smooth_random_bispinor",
    "RHO1",
    "RHO3",
    "jl_factor",
    "invariant_eigenvalue",
    "generalized_invariant",
    "generalized_spin_params",
]

OPERATOR_KINDS = ("H", "Jz", "Jsq", "ID", "IJL", "IBEL")

# Relative finite-difference steps; deeper compositions need larger steps
# because stencil roundoff compounds once per nesting level.
DEFAULT_STEPS = {"H": 2e-3, "Jz": 1e-3, "Jsq": 2e-3, "ID": 1e-3, "IJL": 4e-3, "IBEL": 6e-3}
# Common step for products of two operators (up to seven nested stencils).
COMPOSED_STEP = 1e-2

RHO1 = np.block([[np.zeros((2, 2)), np.eye(2)], [np.eye(2), np.zeros((2, 2))]])
RHO3 = np.diag([1.0, 1.0, -1.0, -1.0])

_W5 = np.array([1.0, -8.0, 8.0, -1.0]) / 12.0
_OFF5 = np.array([-2.0, -1.0, 1.0, 2.0])


class BispinorFunction:
    """Callable ``f(r, theta, phi) -> array (4, ...)``.

    ``two_mj`` (if known) enables exact azimuthal derivatives; ``zalpha`` is
    the coupling that H and the Coulomb invariants pick up by default.
    """

    def __init__(self, fn: Callable, two_mj: int | None = None, zalpha: float | None = None):
        self.fn = fn
        self.two_mj = two_mj
        self.zalpha = zalpha

    def __call__(self, r, theta, phi) -> np.ndarray:
        r, theta, phi = np.broadcast_arrays(
            np.asarray(r, float), np.asarray(theta, float), np.asarray(phi, float)
        )
        return np.asarray(self.fn(r, theta, phi), dtype=complex)

    def __add__(self, other: "BispinorFunction") -> "BispinorFunction":
        return BispinorFunction(lambda r, t, p: self(r, t, p) + other(r, t, p), _common_mj(self, other))

    def __sub__(self, other: "BispinorFunction") -> "BispinorFunction":
        return BispinorFunction(lambda r, t, p: self(r, t, p) - other(r, t, p), _common_mj(self, other))

    def scaled(self, c: complex) -> "BispinorFunction":
        return BispinorFunction(lambda r, t, p: c * self(r, t, p), self.two_mj)


def _common_mj(a, b):
    ma, mb = getattr(a, "two_mj", None), getattr(b, "two_mj", None)
    return ma if ma == mb else None


def _wrap(f) -> BispinorFunction:
    if isinstance(f, BispinorFunction):
        return f
    return BispinorFunction(f, getattr(f, "two_mj", None), getattr(f, "zalpha", None))


def _lift(arr: np.ndarray, ndim: int) -> np.ndarray:
    return arr.reshape((-1,) + (1,) * ndim)


def _d_dr(f, r, t, p, h):
    hr = h * r
    off = _lift(_OFF5, r.ndim)
    vals = f(r[None] + off * hr[None], t[None], p[None])
    return np.tensordot(_W5, vals, axes=(0, 1)) / hr


def _d_dtheta(f, r, t, p, h):
    ht = h * np.minimum(1.0, np.minimum(t, math.pi - t))
    off = _lift(_OFF5, t.ndim)
    vals = f(r[None], t[None] + off * ht[None], p[None])
    return np.tensordot(_W5, vals, axes=(0, 1)) / ht


def _d_dphi(f, r, t, p, h, values=None):
    if f.two_mj is not None:
        m1 = (f.two_mj - 1) // 2
        m = _lift(np.array([m1, m1 + 1, m1, m1 + 1], dtype=float), r.ndim)
        v = f(r, t, p) if values is None else values
        return 1j * m * v
    off = _lift(_OFF5, p.ndim)
    vals = f(r[None], t[None], p[None] + off * h)
    return np.tensordot(_W5, vals, axes=(0, 1)) / h


def _block_lambda(f: BispinorFunction, h: float, lower_sign: float = 1.0) -> BispinorFunction:
    """blockdiag(Lambda, lower_sign * Lambda)."""

    def fn(r, t, p):
        t = np.clip(t, POLE_EPS, math.pi - POLE_EPS)
        v = f(r, t, p)
        dt = _d_dtheta(f, r, t, p, h)
        dp = _d_dphi(f, r, t, p, h, v)
        up = lambda_action(v[:2], dt[:2], dp[:2], t, p)
        down = lambda_action(v[2:], dt[2:], dp[2:], t, p)
        return np.concatenate([up, lower_sign * down])

    return BispinorFunction(fn, f.two_mj)


def _sigma_r_block(f: BispinorFunction) -> BispinorFunction:
    """Sigma . r_hat = blockdiag(sigma_r, sigma_r)."""

    def fn(r, t, p):
        m = sigma_r_matrix(t, p)
        v = f(r, t, p)
        out = np.empty_like(v)
        for s in (0, 2):
            out[s] = m[0, 0] * v[s] + m[0, 1] * v[s + 1]
            out[s + 1] = m[1, 0] * v[s] + m[1, 1] * v[s + 1]
        return out

    return BispinorFunction(fn, f.two_mj)


def _sigma_p_block(f: BispinorFunction, h: float) -> BispinorFunction:
    """blockdiag(sigma.p, sigma.p) via -i (d_r + 1/r) sigma_r - (i/r) Lambda sigma_r."""
    g = _sigma_r_block(f)
    lam_g = _block_lambda(g, h)

    def fn(r, t, p):
        return -1j * (_d_dr(g, r, t, p, h) + g(r, t, p) / r) - 1j * lam_g(r, t, p) / r

    return BispinorFunction(fn, f.two_mj)


def _constant(mat: np.ndarray, f: BispinorFunction) -> BispinorFunction:
    def fn(r, t, p):
        return np.tensordot(mat, f(r, t, p), axes=(1, 0))

    return BispinorFunction(fn, f.two_mj)


def _hamiltonian(f: BispinorFunction, h: float, za: float) -> BispinorFunction:
    sp = _sigma_p_block(f, h)

    def fn(r, t, p):
        v = f(r, t, p)
        s = sp(r, t, p)
        coul = za * za / r
        up = (1.0 - coul) * v[:2] + za * s[2:]
        down = za * s[:2] + (-1.0 - coul) * v[2:]
        return np.concatenate([up, down])

    return BispinorFunction(fn, f.two_mj)


def _jz(f: BispinorFunction, h: float) -> BispinorFunction:
    def fn(r, t, p):
        v = f(r, t, p)
        spin = _lift(np.array([0.5, -0.5, 0.5, -0.5]), r.ndim)
        return -1j * _d_dphi(f, r, t, p, h, v) + spin * v

    return BispinorFunction(fn, f.two_mj)


def _jsq(f: BispinorFunction, h: float) -> BispinorFunction:
    lam2 = _block_lambda(_block_lambda(f, h), h)
    return BispinorFunction(lambda r, t, p: lam2(r, t, p) - 0.25 * f(r, t, p), f.two_mj)


def _ijl(f: BispinorFunction, h: float, za: float) -> BispinorFunction:
    # za Sigma.r_hat - i I_D rho1 (H - rho3)
    shifted = _hamiltonian(f, h, za) - _constant(RHO3, f)
    tail = _block_lambda(_constant(RHO1, shifted), h, lower_sign=-1.0)
    sr = _sigma_r_block(f)

    def fn(r, t, p):
        return za * sr(r, t, p) - 1j * tail(r, t, p)

    return BispinorFunction(fn, f.two_mj)


def _ibel(f: BispinorFunction, h: float, za: float) -> BispinorFunction:
    a = _block_lambda(_ijl(f, h, za), h, lower_sign=-1.0)
    b = _ijl(_block_lambda(f, h, lower_sign=-1.0), h, za)
    return (a - b).scaled(1 / 2j)


@dataclass(frozen=True)
class OperatorHandle:
    """One of ``H, Jz, Jsq, ID, IJL, IBEL`` with its finite-difference step.

    ``zalpha`` is needed by H, IJL and IBEL; when omitted it is read from the
    function the operator acts on.
    """

    kind: str
    fd_step: float | None = None
    zalpha: float | None = None

    def __post_init__(self):
        if self.kind not in OPERATOR_KINDS:
            raise ValueError(f"unknown operator {self.kind!r}; expected one of {OPERATOR_KINDS}")
        if self.fd_step is None:
            object.__setattr__(self, "fd_step", DEFAULT_STEPS[self.kind])
        if not self.fd_step > 0:
            raise ValueError("fd_step must be positive")

    def _zalpha_for(self, f) -> float:
        za = self.zalpha if self.zalpha is not None else getattr(f, "zalpha", None)
        if za is None:
            raise ValueError(f"operator {self.kind} needs zalpha")
        return float(za)

    def __call__(self, f) -> BispinorFunction:
        """Lazily apply the operator; the result is again a bispinor function."""
        g = _wrap(f)
        h = self.fd_step
        if self.kind == "Jz":
            out = _jz(g, h)
        elif self.kind == "Jsq":
            out = _jsq(g, h)
        elif self.kind == "ID":
            out = _block_lambda(g, h, lower_sign=-1.0)
        else:
            za = self._zalpha_for(f)
            builder = {"H": _hamiltonian, "IJL": _ijl, "IBEL": _ibel}[self.kind]
            out = builder(g, h, za)
        out.zalpha = self.zalpha if self.zalpha is not None else g.zalpha
        return out


def _check_points(r, theta):
    r = np.asarray(r, float)
    theta = np.asarray(theta, float)
    if np.any(r <= 0):
        raise ValueError("operators are singular at r = 0")
    if np.any((theta < 0) | (theta > math.pi)):
        raise ValueError("theta must lie in [0, pi]")


def _kind_handle(op, fd_step: float | None = None) -> OperatorHandle:
    return op if isinstance(op, OperatorHandle) else OperatorHandle(op, fd_step)


def apply(op, f, point) -> BispinorSample | np.ndarray:
    """Apply ``op`` to ``f`` at ``point = (r, theta, phi)``.

    Scalar points give a BispinorSample; array points give an array (4, ...).
    """
    op = _kind_handle(op)
    r, theta, phi = point
    _check_points(r, theta)
    out = op(f)(r, theta, phi)
    return BispinorSample.from_array(out) if out.ndim == 1 else out


def apply_jl(f, point, fd_step: float | None = None, zalpha: float | None = None):
    """Johnson-Lippman invariant in its compositional form."""
    return apply(OperatorHandle("IJL", fd_step, zalpha), f, point)


def apply_bel(f, point, fd_step: float | None = None, zalpha: float | None = None):
    """BEL invariant as the commutator (I_D I_JL - I_JL I_D) / 2i."""
    return apply(OperatorHandle("IBEL", fd_step, zalpha), f, point)


def _interior(grid, guard_r, guard_theta):
    first_phi = grid.phi == grid.phi[0]
    mask = (
        first_phi
        & (grid.r >= guard_r[0])
        & (grid.r <= guard_r[1])
        & (grid.theta >= guard_theta)
        & (grid.theta <= math.pi - guard_theta)
    )
    return np.flatnonzero(mask)


def eigen_residual(
    op,
    field: BispinorField | BoundState,
    expected: float,
    grid=None,
    guard_r: tuple[float, float] = (0.05, 40.0),
    guard_theta: float = 0.05,
) -> float:
    """Relative residual ||(A - a) psi|| / ||psi|| over interior grid nodes.

    The norm uses the field's quadrature weights restricted to the guard band.
    Bound states have a definite m_j, so |(A - a) psi|^2 does not depend on
    phi and a single azimuth suffices.
    """
    op = _kind_handle(op)
    if isinstance(field, BispinorField):
        state = BoundState(field.qn, field.sp, field.cfg, beta=field.beta)
        grid = field.grid
    else:
        state = field
        if grid is None:
            from .bispinor import make_grid

            grid = make_grid(state.qn.n_r, state.qn.kappa, state.zalpha)
    idx = _interior(grid, guard_r, guard_theta)
    r, t, p, w = grid.r[idx], grid.theta[idx], grid.phi[idx], grid.weights[idx]
    psi = state(r, t, p)
    a_psi = op(state)(r, t, p)
    num = np.sum(w * np.sum(np.abs(a_psi - expected * psi) ** 2, axis=0))
    den = np.sum(w * np.sum(np.abs(psi) ** 2, axis=0))
    return float(math.sqrt(num / den))


def _sample_points(n_r: int = 6, n_theta: int = 5, r_range=(0.5, 10.0), theta_range=(0.3, math.pi - 0.3), phi=0.37):
    r = np.geomspace(*r_range, n_r)
    t = np.linspace(*theta_range, n_theta)
    R, T = np.meshgrid(r, t, indexing="ij")
    return R.ravel(), T.ravel(), np.full(R.size, phi)


def _rms(v: np.ndarray) -> float:
    return float(np.sqrt(np.mean(np.sum(np.abs(v) ** 2, axis=0))))


def anticommutator_norm(a, b, test, points=None) -> float:
    """||{A, B} psi|| / (||A psi|| + ||B psi|| + ||psi||) on sample points.

    Norms are root-mean-square values over ``points`` (default: a fixed
    log-spaced radial by polar grid away from the origin and the poles).
    Operators given by name use the common step ``COMPOSED_STEP``.
    """
    a, b = _kind_handle(a, COMPOSED_STEP), _kind_handle(b, COMPOSED_STEP)
    if a.kind == b.kind:
        raise ValueError("anticommutator_norm needs two different operators")
    r, t, p = _sample_points() if points is None else points
    ab = a(b(test))(r, t, p)
    ba = b(a(test))(r, t, p)
    den = _rms(a(test)(r, t, p)) + _rms(b(test)(r, t, p)) + _rms(_wrap(test)(r, t, p))
    return _rms(ab + ba) / den


def commutator_norm(a, b, test, points=None) -> float:
    """||[A, B] psi|| / (||A psi|| + ||B psi|| + ||psi||), normalized as above."""
    a, b = _kind_handle(a, COMPOSED_STEP), _kind_handle(b, COMPOSED_STEP)
    r, t, p = _sample_points() if points is None else points
    ab = a(b(test))(r, t, p)
    ba = b(a(test))(r, t, p)
    den = _rms(a(test)(r, t, p)) + _rms(b(test)(r, t, p)) + _rms(_wrap(test)(r, t, p))
    return _rms(ab - ba) / den


def matrix_element(op, left, right, grid) -> complex:
    """<left | A right> by quadrature over ``grid`` (all nodes, all azimuths)."""
    op = _kind_handle(op)
    r, t, p, w = grid.r, grid.theta, grid.phi, grid.weights
    lv = _wrap(left)(r, t, p)
    rv = op(right)(r, t, p)
    return complex(np.sum(w * np.sum(np.conj(lv) * rv, axis=0)))


def smooth_random_bispinor(rng: np.random.Generator, two_mj: int = 1, l_max: int = 3, zalpha: float | None = None) -> BispinorFunction:
    """Random smooth bispinor with definite m_j.

    Each of the four slots is a sum over spherical spinors sharing ``m_j``
    with radial profiles ``r^2 (c0 + c1 r) exp(-r / s)``, which vanish at the
    origin and decay at infinity. The result is smooth at the poles.
    """
    m = HalfInt(two_mj)
    labels = [lab for lab in _labels_with_mj(m, l_max)]
    terms = []
    for block in (0, 1):
        for lab in labels:
            c = rng.normal(size=2) + 1j * rng.normal(size=2)
            scale = rng.uniform(1.0, 3.0)
            terms.append((block, spinor_function(lab), c, scale))

    def fn(r, t, p):
        out = np.zeros((4,) + r.shape, dtype=complex)
        for block, chi, c, scale in terms:
            radial = r * r * (c[0] + c[1] * r) * np.exp(-r / scale)
            out[2 * block : 2 * block + 2] += radial * chi(t, p)
        return out

    return BispinorFunction(fn, two_mj, None if zalpha is None else float(zalpha))


def _labels_with_mj(m: HalfInt, l_max: int):
    for l in range(l_max + 1):
        for parity in (1, -1):
            if parity == -1 and l == 0:
                continue
            if abs(m.twice) <= 2 * l + parity:
                yield SpinorLabel(l, m, parity)


def jl_factor(n_r: int, kappa: int, zalpha: float) -> float:
    """a = sqrt(1 - kappa^2 (1 - eps^2) / zalpha^2) = sqrt(1 - kappa^2 / N^2); zero for n_r = 0."""
    from .radial import energy

    _, _, big_n = energy(n_r, kappa, zalpha)
    return math.sqrt(max(0.0, (big_n - kappa) * (big_n + kappa))) / big_n


def invariant_eigenvalue(kind: str, n_r: int, kappa: int, zalpha: float, sigma: int) -> float:
    """Eigenvalue of I_D, I_JL or I_BEL on the matching special-case state.

    With the spin-parameter conventions of :func:`beta_coeffs`, the Darwin
    and Johnson-Lippman states carry ``sigma * kappa`` and
    ``sigma * zalpha * a``, while the BEL state (theta = pi/4, phi = 0)
    carries ``-sigma * kappa * zalpha * a`` for the commutator definition
    (I_D I_JL - I_JL I_D) / 2i. For n_r = 0 the JL and BEL values are 0.
    """
    if sigma not in (1, -1):
        raise ValueError("sigma must be +1 or -1")
    a = jl_factor(n_r, kappa, zalpha)
    if kind == "ID":
        return sigma * kappa
    if kind == "IJL":
        return sigma * zalpha * a
    if kind == "IBEL":
        return -sigma * kappa * zalpha * a
    raise ValueError(f"no closed-form eigenvalue for {kind!r}")


def generalized_invariant(c_d: float, c_jl: float, c_bel: float, zalpha: float | None = None, fd_step: float | None = None):
    """Lazy operator f -> c_D I_D + (c_JL / za) I_JL + (c_BEL / za) I_BEL.

    Squared eigenvalue on any state of level (n_r, kappa):
    c_D^2 kappa^2 + c_JL^2 a^2 + c_BEL^2 kappa^2 a^2.
    """
    step = COMPOSED_STEP if fd_step is None else fd_step

    def op(f):
        g = _wrap(f)
        za = zalpha if zalpha is not None else g.zalpha
        if za is None or za <= 0:
            raise ValueError("generalized invariant needs zalpha > 0")
        d = OperatorHandle("ID", step)(g)
        jl = OperatorHandle("IJL", step, za)(g)
        bel = OperatorHandle("IBEL", step, za)(g)
        out = d.scaled(c_d) + jl.scaled(c_jl / za) + bel.scaled(c_bel / za)
        out.zalpha = za
        return out

    return op


def generalized_spin_params(c_d: float, c_jl: float, c_bel: float, n_r: int, kappa: int, zalpha: float):
    """Spin parameters whose sigma = +1 state is the positive eigenstate of the generalized invariant.

    On the pair of Darwin states the three invariants act as Pauli matrices,
    I_D = kappa s_z, I_JL = za a s_y and I_BEL = -kappa za a s_x, so the
    generalized invariant is v . s with v = (-c_BEL kappa a, c_JL a, c_D kappa).
    The state (e^{i phi} cos theta, e^{-i phi} sin theta) points along
    polar angle 2 theta and azimuth -2 phi. Returns ``(SpinParams, |v|)``;
    the sigma = -1 state then has eigenvalue -|v|.
    """
    from .bispinor import SpinParams

    a = jl_factor(n_r, kappa, zalpha)
    v = np.array([-c_bel * kappa * a, c_jl * a, c_d * kappa])
    norm = float(np.linalg.norm(v))
    if norm == 0:
        raise ValueError("the generalized invariant vanishes on this level")
    polar = math.acos(max(-1.0, min(1.0, v[2] / norm)))
    azimuth = math.atan2(v[1], v[0]) if math.hypot(v[0], v[1]) > 0 else 0.0
    return SpinParams(0.5 * polar, -0.5 * azimuth), norm
