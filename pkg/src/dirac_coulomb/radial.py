"""Closed-form radial solutions of the Coulomb Dirac problem.

Units are hbar = m = c = 1 with e^2 = alpha, so the Coulomb coupling enters
only through ``zalpha = Z * alpha``. Radii are measured in units of r_B/Z,
and the scaled radius of a state is ``x = 2 r / N`` with
``N = sqrt((n_r + gamma)^2 + zalpha^2)``.

Polynomial coefficients are stored as coefficients of powers of ``x`` (not of
the Compton-scaled radius), which keeps them finite as ``zalpha -> 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .angular import HalfInt
from .specfun import gamma_fn, gen_laguerre

__all__ = [
    "FINE_STRUCTURE",
    "PhysicalConfig",
    "QuantumNumbers",
    "CoefficientSet",
    "RadialSolution",
    "gamma_j",
    "energy",
    "fine_structure",
    "coeffs_by_recurrence",
    "polynomials_laguerre",
    "normalization_constant",
    "solve_radial",
    "radial_functions",
]

FINE_STRUCTURE = 7.2973525693e-3


@dataclass(frozen=True)
class PhysicalConfig:
    """Nuclear charge number and fine-structure constant."""

    Z: float = 1.0
    alpha: float = FINE_STRUCTURE

    def __post_init__(self):
        if not (self.Z > 0 and math.isfinite(self.Z)):
            raise ValueError(f"Z must be positive, got {self.Z!r}")
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ValueError(f"alpha must be positive, got {self.alpha!r}")

    @property
    def zalpha(self) -> float:
        return self.Z * self.alpha


@dataclass(frozen=True)
class QuantumNumbers:
    """(n_r, kappa, m_j, sigma) of one bound state; kappa = j + 1/2."""

    n_r: int
    kappa: int
    m_j: HalfInt
    sigma: int = 1

    def __post_init__(self):
        if not isinstance(self.m_j, HalfInt):
            object.__setattr__(self, "m_j", HalfInt(int(self.m_j)))
        if self.n_r < 0 or int(self.n_r) != self.n_r:
            raise ValueError("n_r must be a non-negative integer")
        if self.kappa < 1 or int(self.kappa) != self.kappa:
            raise ValueError("kappa must be a positive integer")
        if self.sigma not in (1, -1):
            raise ValueError("sigma must be +1 or -1")
        if abs(self.m_j.twice) > 2 * self.kappa - 1:
            raise ValueError(f"|m_j| = {abs(self.m_j)} exceeds j = {self.kappa - 0.5}")
        if self.n_r == 0 and self.sigma != 1:
            raise ValueError("n_r = 0 states exist only with sigma = +1")

    @classmethod
    def from_n(cls, n: int, kappa: int, two_mj: int, sigma: int = 1) -> "QuantumNumbers":
        if not 1 <= kappa <= n:
            raise ValueError(f"kappa must lie in [1, n] = [1, {n}], got {kappa}")
        return cls(n - kappa, kappa, HalfInt(two_mj), sigma)

    @property
    def n(self) -> int:
        """Principal quantum number."""
        return self.n_r + self.kappa

    @property
    def j(self) -> float:
        return self.kappa - 0.5

    @property
    def two_mj(self) -> int:
        return self.m_j.twice


def _check_zalpha(kappa: int, zalpha: float) -> None:
    if kappa < 1:
        raise ValueError("kappa must be >= 1")
    if not (zalpha >= 0 and math.isfinite(zalpha)):
        raise ValueError(f"Z*alpha must be a finite non-negative number, got {zalpha!r}")
    if zalpha >= kappa:
        raise ValueError(f"no bound state: Z*alpha = {zalpha} >= kappa = {kappa}")


def gamma_j(kappa: int, zalpha: float) -> float:
    """Indicial exponent sqrt(kappa^2 - zalpha^2) (positive root)."""
    _check_zalpha(kappa, zalpha)
    return math.sqrt((kappa - zalpha) * (kappa + zalpha))


def energy(n_r: int, kappa: int, zalpha: float) -> tuple[float, float, float]:
    """Return ``(epsilon, varkappa, N)`` for the level (n_r, kappa).

    ``epsilon`` is E / mc^2, ``varkappa = zalpha / N`` the damping rate in
    Compton units, and ``epsilon**2 + varkappa**2 == 1``.
    """
    if n_r < 0:
        raise ValueError("n_r must be non-negative")
    g = gamma_j(kappa, zalpha)
    big_n = math.hypot(n_r + g, zalpha)
    return (n_r + g) / big_n, zalpha / big_n, big_n


def fine_structure(n: int, kappa: int, zalpha: float) -> tuple[float, float]:
    """Fine-structure shift ``delta = kappa - gamma`` and the energy of level (n, kappa).

    Uses the principal-number form ``epsilon = (n - delta) / sqrt((n - delta)^2 + zalpha^2)``,
    which equals ``energy(n - kappa, kappa, zalpha)[0]``.
    """
    if not 1 <= kappa <= n:
        raise ValueError(f"kappa must lie in [1, n] = [1, {n}], got {kappa}")
    g = gamma_j(kappa, zalpha)
    # kappa - gamma written without cancellation.
    delta = zalpha * zalpha / (kappa + g)
    m = n - delta
    return delta, m / math.hypot(m, zalpha)


@dataclass(frozen=True)
class CoefficientSet:
    """Power-series coefficients in x of the two polynomial pairs.

    ``(b_plus, d_minus)`` solve one first-order system and
    ``(b_minus, d_plus)`` the other. Seeds are ``b_plus[0] = b_minus[0] = 1``.
    """

    b_plus: np.ndarray
    d_minus: np.ndarray
    b_minus: np.ndarray
    d_plus: np.ndarray


def _pair_coefficients(n_r: int, kappa: int, zalpha: float, s: int, length: int):
    g = gamma_j(kappa, zalpha)
    big_n = math.hypot(n_r + g, zalpha)
    b = np.zeros(length)
    d = np.zeros(length)
    b[0] = 1.0
    d[0] = -math.sqrt((kappa - s * g) / (kappa + s * g))
    if length > 1:
        b[1] = -s * (big_n + 1 - n_r + s * kappa) * (big_n + n_r - s * kappa) / (2 * (1 + 2 * g) * (kappa + s * g)) * b[0]
        d[1] = -(big_n + n_r - 1 + s * kappa) * (big_n + n_r - s * kappa) / (2 * (1 + 2 * g) * (big_n + n_r + g)) * d[0]
    for n in range(1, length - 1):
        b[n + 1] = (n + big_n + 1 - n_r + s * kappa) * (n - n_r) / (
            (n + 1) * (n + 1 + 2 * g) * (n + big_n - n_r + s * kappa)
        ) * b[n]
        d[n + 1] = (n + 1 - big_n - n_r - s * kappa) * (n - n_r) / (
            (n + 1) * (n + 1 + 2 * g) * (n - big_n - n_r - s * kappa)
        ) * d[n]
    return b, d


def coeffs_by_recurrence(n_r: int, kappa: int, zalpha: float, length: int | None = None) -> CoefficientSet:
    """Polynomial coefficients from the two-term recurrences at the quantized energy.

    ``length`` defaults to ``n_r + 1``; larger values continue the recurrence,
    whose factor ``(n - n_r)`` makes every coefficient past ``n_r`` vanish.
    For ``n_r == 0`` the (minus, plus) pair is identically zero.

    Requires ``zalpha > 0``: the seed ratio of the (minus, plus) pair is
    singular in the nonrelativistic limit.
    """
    _check_zalpha(kappa, zalpha)
    if zalpha == 0:
        raise ValueError("the recurrence seeds need Z*alpha > 0; use polynomials_laguerre at Z*alpha = 0")
    if n_r < 0:
        raise ValueError("n_r must be non-negative")
    length = n_r + 1 if length is None else int(length)
    if length < 1:
        raise ValueError("length must be >= 1")
    b_plus, d_minus = _pair_coefficients(n_r, kappa, zalpha, 1, length)
    if n_r == 0:
        b_minus = np.zeros(length)
        d_plus = np.zeros(length)
    else:
        b_minus, d_plus = _pair_coefficients(n_r, kappa, zalpha, -1, length)
    for arr in (b_plus, d_minus, b_minus, d_plus):
        arr.setflags(write=False)
    return CoefficientSet(b_plus, d_minus, b_minus, d_plus)


def polynomials_laguerre(n_r: int, kappa: int, zalpha: float, x):
    """The four Laguerre-form polynomials ``(P+, Q-, P-, Q+)`` at scaled radius x.

    All are combinations of L_{n_r}^{2 gamma}(x) and L_{n_r-1}^{2 gamma}(x)
    with L_{-1} = 0. For ``n_r == 0`` the pair (P-, Q+) is zero.
    """
    _, _, big_n = energy(n_r, kappa, zalpha)
    g = gamma_j(kappa, zalpha)
    x = np.asarray(x, dtype=float)
    ln = gen_laguerre(n_r, 2 * g, x)
    ln1 = gen_laguerre(n_r - 1, 2 * g, x)
    a = (n_r + 2 * g) / (big_n + kappa)
    p_plus = ln - a * ln1
    q_minus = ln + a * ln1
    if n_r == 0:
        zero = np.zeros_like(x) if x.ndim else 0.0
        return p_plus, q_minus, zero, zero
    c = math.sqrt(n_r * (n_r + 2 * g)) / (big_n + kappa)
    e = math.sqrt((n_r + 2 * g) / n_r)
    return p_plus, q_minus, c * ln - e * ln1, c * ln + e * ln1


def normalization_constant(n_r: int, kappa: int, zalpha: float) -> float:
    """Common normalization constant C of the state (n_r, kappa)."""
    eps, _, big_n = energy(n_r, kappa, zalpha)
    g = gamma_j(kappa, zalpha)
    num = (1 + eps) * (big_n + kappa) * math.factorial(n_r)
    return math.sqrt(num / (4 * big_n * gamma_fn(n_r + 1 + 2 * g)))


@dataclass(frozen=True)
class RadialSolution:
    """Everything radial about one level (n_r, kappa) at a given Z*alpha."""

    n_r: int
    kappa: int
    zalpha: float
    gamma_j: float
    epsilon: float
    varkappa: float
    N: float
    C: float
    coeffs: CoefficientSet | None = field(default=None, repr=False)

    @property
    def lower_factor(self) -> float:
        """sqrt((1 - eps) / (1 + eps)), the weight of the lower spinor."""
        # 1 - eps computed as varkappa^2 / (1 + eps) to avoid cancellation.
        return self.varkappa / (1 + self.epsilon)

    def scaled_radius(self, r):
        """x = 2 r / N for r in units of r_B / Z."""
        return 2.0 * np.asarray(r, dtype=float) / self.N

    # Convenience views onto the recurrence coefficients.
    @property
    def b_plus(self):
        return None if self.coeffs is None else self.coeffs.b_plus

    @property
    def d_minus(self):
        return None if self.coeffs is None else self.coeffs.d_minus

    @property
    def b_minus(self):
        return None if self.coeffs is None else self.coeffs.b_minus

    @property
    def d_plus(self):
        return None if self.coeffs is None else self.coeffs.d_plus


def solve_radial(n_r: int, kappa: int, zalpha: float) -> RadialSolution:
    """Build the RadialSolution; recurrence coefficients are attached when zalpha > 0."""
    eps, vk, big_n = energy(n_r, kappa, zalpha)
    coeffs = coeffs_by_recurrence(n_r, kappa, zalpha) if zalpha > 0 else None
    return RadialSolution(
        n_r=n_r,
        kappa=kappa,
        zalpha=zalpha,
        gamma_j=gamma_j(kappa, zalpha),
        epsilon=eps,
        varkappa=vk,
        N=big_n,
        C=normalization_constant(n_r, kappa, zalpha),
        coeffs=coeffs,
    )


def radial_functions(sol: RadialSolution, r):
    """Radial amplitudes ``(F+, G-, F-, G+)`` at radius r (units r_B / Z).

    With spherical spinors chi+ = chi_{j-1/2,m_j,+} and chi- = chi_{j+1/2,m_j,-},
    a state with spin coefficients (beta1, beta2) has upper spinor
    ``beta1 F+ chi+ + beta2 F- chi-`` and lower spinor
    ``beta2 G+ chi+ + beta1 G- chi-``. Each pair satisfies
    ``int (F^2 + G^2) r^2 dr = 1`` (the second pair vanishes for n_r = 0).

    At r = 0 the amplitudes diverge when gamma < 1; ``inf`` is returned there.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("radius must be non-negative")
    x = sol.scaled_radius(r)
    p_plus, q_minus, p_minus, q_plus = polynomials_laguerre(sol.n_r, sol.kappa, sol.zalpha, x)
    with np.errstate(divide="ignore", invalid="ignore"):
        envelope = (2.0 / sol.N) ** 1.5 * sol.C * np.exp(-0.5 * x) * np.power(x, sol.gamma_j - 1.0)
    if np.ndim(envelope) == 0:
        envelope = float(envelope)
    s = sol.lower_factor
    if sol.n_r == 0:
        zero = np.zeros_like(x) if x.ndim else 0.0
        return envelope * p_plus, -s * envelope * q_minus, zero, zero
    return (
        envelope * p_plus,
        -s * envelope * q_minus,
        envelope * p_minus,
        s * envelope * q_plus,
    )
