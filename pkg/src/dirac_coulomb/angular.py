"""Spherical spinors, the spin-orbit operator Lambda and the matrix sigma_r.

Angles follow the physics convention: ``theta`` is the polar angle in
[0, pi] and ``phi`` the azimuth. hbar = 1 throughout.

A spinor with total projection m_j has components ``f1(theta) e^{i m1 phi}``
and ``f2(theta) e^{i m2 phi}`` with ``m1 = m_j - 1/2`` and ``m2 = m_j + 1/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import total_ordering
from typing import Callable, Iterator

import numpy as np

from .specfun import QuadratureRule, assoc_legendre

__all__ = [
    "HalfInt",
    "SpinorSample",
    "SpinorLabel",
    "AzimuthalSpinor",
    "POLE_EPS",
    "spherical_spinor",
    "spinor_function",
    "sigma_r_matrix",
    "apply_sigma_r",
    "lambda_action",
    "apply_lambda",
    "angular_inner_product",
    "iter_labels",
]

POLE_EPS = 1e-6


@total_ordering
@dataclass(frozen=True)
class HalfInt:
    """Odd half-integer stored as twice its value (``HalfInt(3)`` is 3/2)."""

    twice: int

    def __post_init__(self):
        if int(self.twice) != self.twice or self.twice % 2 == 0:
            raise ValueError(f"HalfInt needs an odd doubled value, got {self.twice!r}")
        object.__setattr__(self, "twice", int(self.twice))

    @classmethod
    def from_float(cls, value: float) -> "HalfInt":
        twice = round(2 * value)
        if abs(2 * value - twice) > 1e-12:
            raise ValueError(f"{value!r} is not a half-integer")
        return cls(twice)

    def __float__(self) -> float:
        return self.twice / 2

    def __neg__(self) -> "HalfInt":
        return HalfInt(-self.twice)

    def __abs__(self) -> "HalfInt":
        return HalfInt(abs(self.twice))

    def __lt__(self, other: "HalfInt") -> bool:
        return self.twice < other.twice

    def __str__(self) -> str:
        return f"{self.twice}/2"

    @property
    def m1(self) -> int:
        """Azimuthal number of the first (spin-up) component."""
        return (self.twice - 1) // 2

    @property
    def m2(self) -> int:
        return (self.twice + 1) // 2


@dataclass(frozen=True)
class SpinorSample:
    """Two-component spinor values; ``up``/``down`` may be scalars or arrays."""

    up: complex | np.ndarray
    down: complex | np.ndarray

    def as_array(self) -> np.ndarray:
        return np.stack(np.broadcast_arrays(np.asarray(self.up, complex), np.asarray(self.down, complex)))

    @classmethod
    def from_array(cls, arr) -> "SpinorSample":
        arr = np.asarray(arr, dtype=complex)
        up, down = arr[0], arr[1]
        if up.ndim == 0:
            return cls(complex(up), complex(down))
        return cls(up, down)


@dataclass(frozen=True)
class SpinorLabel:
    """Label (l, m_j, parity) of chi_{l, m_j, +/-}.

    Parity +1 is the Lambda eigenvalue l+1 (j = l + 1/2); parity -1 is the
    eigenvalue -l (j = l - 1/2).
    """

    l: int
    m_j: HalfInt
    parity: int

    def __post_init__(self):
        if not isinstance(self.m_j, HalfInt):
            object.__setattr__(self, "m_j", HalfInt(int(self.m_j)))
        if self.l < 0:
            raise ValueError("l must be non-negative")
        if self.parity not in (1, -1):
            raise ValueError("parity must be +1 or -1")
        if self.parity == -1 and self.l < 1:
            raise ValueError("chi_{l,m,-} requires l >= 1")
        if abs(self.m_j.twice) > 2 * self.j:
            raise ValueError(f"|m_j| = {abs(self.m_j)} exceeds j = {self.j} for {self}")

    @property
    def j(self) -> float:
        return self.l + 0.5 * self.parity

    @property
    def eigenvalue(self) -> int:
        """Eigenvalue of Lambda (hbar = 1)."""
        return self.l + 1 if self.parity == 1 else -self.l


def iter_labels(l_max: int) -> Iterator[SpinorLabel]:
    """Every valid spinor label with l <= l_max."""
    for l in range(l_max + 1):
        for parity in (1, -1):
            if parity == -1 and l == 0:
                continue
            two_j = 2 * l + parity
            for two_mj in range(-two_j, two_j + 1, 2):
                yield SpinorLabel(l, HalfInt(two_mj), parity)


def _signed_legendre(l: int, m: int, theta):
    # Condon-Shortley phase for m > 0 only, matching the printed n=1,2 spinors.
    p = assoc_legendre(l, m, np.cos(theta), np.sin(theta))
    return -p if (m > 0 and m % 2) else p


def _component_coefficients(label: SpinorLabel) -> tuple[float, float]:
    l, m1, m2 = label.l, label.m_j.m1, label.m_j.m2

    def ratio(m):
        if abs(m) > l:
            return 0.0
        return math.factorial(l - abs(m)) / (4.0 * math.pi * math.factorial(l + abs(m)))

    if label.parity == 1:
        c1 = math.sqrt((l + 1 + m1) * ratio(m1))
        c2 = math.sqrt((l + 1 - m2) * ratio(m2))
    else:
        c1 = -math.sqrt((l - m1) * ratio(m1))
        c2 = math.sqrt((l + m2) * ratio(m2))
    return c1, c2


def spherical_spinor(label: SpinorLabel, theta, phi) -> SpinorSample:
    """Normalized spherical spinor chi_{l, m_j, +/-}(theta, phi).

    The overall phase is i**l. A component whose azimuthal number exceeds l
    in magnitude is exactly zero.
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    l, m1, m2 = label.l, label.m_j.m1, label.m_j.m2
    c1, c2 = _component_coefficients(label)
    phase = 1j**l
    up = phase * c1 * _signed_legendre(l, m1, theta) * np.exp(1j * m1 * phi)
    down = phase * c2 * _signed_legendre(l, m2, theta) * np.exp(1j * m2 * phi)
    if np.ndim(up) == 0 and np.ndim(down) == 0:
        return SpinorSample(complex(up), complex(down))
    up, down = np.broadcast_arrays(up, down)
    return SpinorSample(up, down)


@dataclass(frozen=True)
class AzimuthalSpinor:
    """Spinor given as (m1, f1(theta), f2(theta)); the azimuth dependence is
    ``e^{i m1 phi}`` and ``e^{i (m1+1) phi}``, so phi-derivatives are exact."""

    m1: int
    f1: Callable
    f2: Callable

    @property
    def m2(self) -> int:
        return self.m1 + 1

    def __call__(self, theta, phi) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        phi = np.asarray(phi, dtype=float)
        up = np.asarray(self.f1(theta), complex) * np.exp(1j * self.m1 * phi)
        down = np.asarray(self.f2(theta), complex) * np.exp(1j * self.m2 * phi)
        return np.stack(np.broadcast_arrays(up, down))


def spinor_function(label: SpinorLabel) -> AzimuthalSpinor:
    """The theta-profiles of ``spherical_spinor(label)`` as an AzimuthalSpinor."""
    l, m1, m2 = label.l, label.m_j.m1, label.m_j.m2
    c1, c2 = _component_coefficients(label)
    phase = 1j**l
    return AzimuthalSpinor(
        m1,
        lambda th: phase * c1 * _signed_legendre(l, m1, th),
        lambda th: phase * c2 * _signed_legendre(l, m2, th),
    )


def sigma_r_matrix(theta, phi) -> np.ndarray:
    """sigma . r/|r| as an array of shape (2, 2, *broadcast_shape)."""
    theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    c, s = np.cos(theta), np.sin(theta)
    e = np.exp(1j * phi)
    return np.array([[c + 0j, np.conj(e) * s], [e * s, -c + 0j]])


def apply_sigma_r(s: SpinorSample, theta, phi) -> SpinorSample:
    """sigma_r acting on spinor values sampled at (theta, phi)."""
    m = sigma_r_matrix(theta, phi)
    up = m[0, 0] * s.up + m[0, 1] * s.down
    down = m[1, 0] * s.up + m[1, 1] * s.down
    return SpinorSample.from_array(np.stack(np.broadcast_arrays(up, down)))


def lambda_action(psi, dpsi_dtheta, dpsi_dphi, theta, phi) -> np.ndarray:
    """Lambda = sigma.L + 1 from spinor values and first derivatives.

    ``psi`` and both derivative arrays have shape (2, ...). Only first
    derivatives enter because Lambda is first order in the angles.
    """
    cot = np.cos(theta) / np.sin(theta)
    e_minus = np.exp(-1j * phi)
    e_plus = np.exp(1j * phi)
    up = (-1j * dpsi_dphi[0] + psi[0]) + e_minus * (-dpsi_dtheta[1] + 1j * cot * dpsi_dphi[1])
    down = e_plus * (dpsi_dtheta[0] + 1j * cot * dpsi_dphi[0]) + (1j * dpsi_dphi[1] + psi[1])
    return np.stack([up, down])


_FD5 = np.array([1.0, -8.0, 8.0, -1.0]) / 12.0
_OFFSETS = np.array([-2.0, -1.0, 1.0, 2.0])


def _clamp_theta(theta):
    return np.clip(theta, POLE_EPS, math.pi - POLE_EPS)


def apply_lambda(f, theta, phi, h: float = 1e-4) -> SpinorSample:
    """Numerically apply Lambda to a spinor-valued function at (theta, phi).

    ``f`` is an :class:`AzimuthalSpinor` (exact phi-derivatives) or any
    callable ``f(theta, phi) -> array (2, ...)`` (5-point differences in phi).
    Theta-derivatives use 5-point central differences with step ``h``, shrunk
    near the poles; theta is clamped to [POLE_EPS, pi - POLE_EPS].
    """
    theta = _clamp_theta(np.asarray(theta, dtype=float))
    phi = np.asarray(phi, dtype=float)
    theta, phi = np.broadcast_arrays(theta, phi)
    ht = h * np.minimum(1.0, np.minimum(theta, math.pi - theta))
    psi = np.asarray(f(theta, phi), complex)
    dth = sum(w * np.asarray(f(theta + k * ht, phi), complex) for w, k in zip(_FD5, _OFFSETS)) / ht
    if isinstance(f, AzimuthalSpinor):
        dph = np.stack([1j * f.m1 * psi[0], 1j * f.m2 * psi[1]])
    else:
        dph = sum(w * np.asarray(f(theta, phi + k * h), complex) for w, k in zip(_FD5, _OFFSETS)) / h
    return SpinorSample.from_array(lambda_action(psi, dth, dph, theta, phi))


def angular_inner_product(a: SpinorLabel, b: SpinorLabel, rule: QuadratureRule, n_phi: int | None = None) -> complex:
    """<chi_a | chi_b> over the unit sphere.

    ``rule`` is a Gauss-Legendre rule in cos(theta); the azimuth uses the
    uniform trapezoid rule, exact for the trigonometric content when
    ``n_phi >= 2 * m_max + 3``.
    """
    if rule.kind != "legendre":
        raise ValueError("angular_inner_product needs a Gauss-Legendre rule in cos(theta)")
    if n_phi is None:
        m_max = max(abs(a.m_j.m1), abs(a.m_j.m2), abs(b.m_j.m1), abs(b.m_j.m2))
        n_phi = 2 * m_max + 3
    theta = np.arccos(rule.nodes)[:, None]
    phi = (2.0 * math.pi * np.arange(n_phi) / n_phi)[None, :]
    ca = spherical_spinor(a, theta, phi)
    cb = spherical_spinor(b, theta, phi)
    integrand = np.conj(ca.up) * cb.up + np.conj(ca.down) * cb.down
    w = rule.weights[:, None] * (2.0 * math.pi / n_phi)
    return complex(np.sum(w * integrand))
