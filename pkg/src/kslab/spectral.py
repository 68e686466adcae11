"""Sine-basis spectral representation on (-l, l).

Fields are real coefficient vectors of length N over the basis
phi_k(x) = sin(k pi (x + l) / (2 l)), k = 1..N, which vanishes at both
endpoints and diagonalizes d^2/dx^2, d^4/dx^4 and the shifted linear
operator A u = -u_xxxx - u_xx - c u.  All operations here are pure
functions of their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.fft import dct, dst


@dataclass(frozen=True)
class DomainSpec:
    """Interval half-length l, shift constant c and Galerkin mode count N.

    The shift must exceed 1/4: sup over real mu of (mu^2 - mu^4) is 1/4,
    so any c > 1/4 makes every eigenvalue of A strictly negative
    regardless of l and k.
    """

    half_length: float
    shift: float = 0.5
    modes: int = 64

    def __post_init__(self) -> None:
        if not self.half_length > 0:
            raise ValueError("half_length must be positive")
        if not self.shift > 0.25:
            raise ValueError("shift must exceed 0.25 so that A is strictly negative")
        if self.modes < 1:
            raise ValueError("modes must be at least 1")

    @cached_property
    def mu(self) -> np.ndarray:
        """Wavenumbers mu_k = k pi / (2 l), k = 1..N."""
        return np.arange(1, self.modes + 1) * np.pi / (2.0 * self.half_length)

    @cached_property
    def lam(self) -> np.ndarray:
        """Eigenvalues lambda_k = -mu_k^4 + mu_k^2 - c of A (all negative)."""
        mu2 = self.mu**2
        return -(mu2**2) + mu2 - self.shift

    @property
    def dealias_points(self) -> int:
        """Interior grid size for alias-free quadratic products (3/2 rule)."""
        return -(-3 * self.modes // 2)


@dataclass(frozen=True)
class NormReport:
    """All norms of a single field used by the a priori estimates."""

    h_norm: float
    v_norm: float
    l4_norm: float
    vdual_norm: float
    hs_quarter: float
    hs_half: float


def eigenvalue(k: int, dom: DomainSpec) -> float:
    """Eigenvalue lambda_k = -mu_k^4 + mu_k^2 - c for any mode index k >= 1."""
    if k < 1:
        raise ValueError("mode index must be >= 1")
    mu = k * np.pi / (2.0 * dom.half_length)
    return float(-(mu**4) + mu**2 - dom.shift)


def eigenvalues(dom: DomainSpec) -> np.ndarray:
    """Eigenvalues for modes 1..N (copy of the cached array)."""
    return dom.lam.copy()


def _as_field(f: np.ndarray, dom: DomainSpec) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.shape != (dom.modes,):
        raise ValueError(f"field must have shape ({dom.modes},), got {f.shape}")
    return f


def apply_semigroup(f: np.ndarray, t: float, dom: DomainSpec) -> np.ndarray:
    """S(t) f: scale coefficient k by exp(lambda_k t).  Contraction for t >= 0."""
    if t < 0:
        raise ValueError("semigroup time must be nonnegative")
    return _as_field(f, dom) * np.exp(dom.lam * t)


def grid_points(half_length: float, points: int) -> np.ndarray:
    """Interior grid x_j = -l + 2 l j / (P + 1), j = 1..P."""
    return -half_length + 2.0 * half_length * np.arange(1, points + 1) / (points + 1)


def to_grid(f: np.ndarray, points: int) -> np.ndarray:
    """Evaluate the field at the interior grid of the given size via DST-I.

    Works on a single field (shape (N,)) or a stack of fields (..., N);
    the transform acts on the last axis.
    """
    if points < 1:
        raise ValueError("points must be >= 1")
    f = np.asarray(f, dtype=float)
    n = f.shape[-1]
    if points < n:
        raise ValueError("grid must have at least as many points as modes")
    pad = np.zeros(f.shape[:-1] + (points,))
    pad[..., :n] = f
    return 0.5 * dst(pad, type=1, axis=-1)


def from_grid(values: np.ndarray, modes: int | None = None) -> np.ndarray:
    """Recover sine coefficients from interior grid values (inverse of to_grid).

    With `modes` set, the result is the projection onto the first `modes`
    coefficients; `modes` may not exceed the grid size.
    """
    values = np.asarray(values, dtype=float)
    points = values.shape[-1]
    if points < 1:
        raise ValueError("need at least one grid value")
    if modes is None:
        modes = points
    if modes > points:
        raise ValueError("points must be >= modes for an exact inverse")
    coeffs = dst(values, type=1, axis=-1) / (points + 1)
    return coeffs[..., :modes]


def _derivative_grid(f: np.ndarray, dom: DomainSpec, points: int) -> np.ndarray:
    """u_x at the interior grid: cosine series with coefficients a_k mu_k (DCT-I)."""
    f = np.asarray(f, dtype=float)
    pad = np.zeros(f.shape[:-1] + (points + 2,))
    pad[..., 1 : dom.modes + 1] = f * dom.mu
    return 0.5 * dct(pad, type=1, axis=-1)[..., 1 : points + 1]


def l4_norm(f: np.ndarray, dom: DomainSpec) -> float:
    """L^4(I) norm by uniform-weight quadrature on the dealiased grid."""
    vals = to_grid(_as_field(f, dom), dom.dealias_points)
    weight = 2.0 * dom.half_length / (dom.dealias_points + 1)
    return float((weight * np.sum(vals**4)) ** 0.25)


def l4_norms(path: np.ndarray, dom: DomainSpec) -> np.ndarray:
    """L^4 norms of every row of a (steps, N) path in one transform."""
    path = np.asarray(path, dtype=float)
    vals = to_grid(path, dom.dealias_points)
    weight = 2.0 * dom.half_length / (dom.dealias_points + 1)
    return (weight * np.sum(vals**4, axis=-1)) ** 0.25


def hs_norm(f: np.ndarray, dom: DomainSpec, s: float) -> float:
    """Spectral H^s norm: (l * sum (1 + mu_k^2)^s a_k^2)^(1/2)."""
    f = _as_field(f, dom)
    w = (1.0 + dom.mu**2) ** s
    return float(np.sqrt(dom.half_length * np.sum(w * f**2)))


def h_norm(f: np.ndarray, dom: DomainSpec) -> float:
    """L^2(I) norm (each basis function has integral of its square equal to l)."""
    f = _as_field(f, dom)
    return float(np.sqrt(dom.half_length * np.sum(f**2)))


def norms(f: np.ndarray, dom: DomainSpec) -> NormReport:
    """Every norm of a field: H, V (full H^1), L^4, V' and H^{1/4}, H^{1/2}."""
    f = _as_field(f, dom)
    w = 1.0 + dom.mu**2
    sq = dom.half_length * f**2
    return NormReport(
        h_norm=float(np.sqrt(np.sum(sq))),
        v_norm=float(np.sqrt(np.sum(w * sq))),
        l4_norm=l4_norm(f, dom),
        vdual_norm=float(np.sqrt(np.sum(sq / w))),
        hs_quarter=float(np.sqrt(np.sum(w**0.25 * sq))),
        hs_half=float(np.sqrt(np.sum(w**0.5 * sq))),
    )


def quadratic_term(f: np.ndarray, dom: DomainSpec) -> np.ndarray:
    """Alias-free projection of u u_x onto the first N modes.

    Pseudo-spectral product on the 3/2 zero-padded grid; for a single
    quadratic product the padded projection equals the exact convolution.
    Accepts a single field or a stack of fields.
    """
    f = np.asarray(f, dtype=float)
    P = dom.dealias_points
    u = to_grid(f, P)
    ux = _derivative_grid(f, dom, P)
    return from_grid(u * ux, dom.modes)


def nonlinear_G(f: np.ndarray, dom: DomainSpec) -> np.ndarray:
    """G(u) = -u u_x + c u with the dealiased quadratic product."""
    f = np.asarray(f, dtype=float)
    return dom.shift * f - quadratic_term(f, dom)


def fractional_power_apply(f: np.ndarray, alpha: float, dom: DomainSpec) -> np.ndarray:
    """(-A)^alpha f: scale coefficient k by (-lambda_k)^alpha, alpha in [0, 1]."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    if np.any(dom.lam >= 0):
        raise ValueError("all eigenvalues must be negative (shift too small)")
    return _as_field(f, dom) * (-dom.lam) ** alpha


# ---------------------------------------------------------------------------
# Discrete space-time norms of sampled paths (rows = time snapshots).

def _check_path(path: np.ndarray, times: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    path = np.asarray(path, dtype=float)
    times = np.asarray(times, dtype=float)
    if path.ndim != 2 or path.shape[0] != times.shape[0]:
        raise ValueError("path must be (steps, N) aligned with times")
    if path.shape[0] < 1:
        raise ValueError("path must contain at least one snapshot")
    return path, times


def linf_h(path: np.ndarray, times: np.ndarray, dom: DomainSpec) -> float:
    """L^inf(0,T;H) norm: max over snapshots of the H norm."""
    path, _ = _check_path(path, times)
    return float(np.max(np.sqrt(dom.half_length * np.sum(path**2, axis=1))))


def linf_v(path: np.ndarray, times: np.ndarray, dom: DomainSpec) -> float:
    """L^inf(0,T;V) norm."""
    path, _ = _check_path(path, times)
    w = 1.0 + dom.mu**2
    return float(np.max(np.sqrt(dom.half_length * np.sum(w * path**2, axis=1))))


def l2_v(path: np.ndarray, times: np.ndarray, dom: DomainSpec) -> float:
    """L^2(0,T;V) norm, trapezoid in time."""
    path, times = _check_path(path, times)
    w = 1.0 + dom.mu**2
    sq = dom.half_length * np.sum(w * path**2, axis=1)
    return float(np.sqrt(np.trapezoid(sq, times)))


def l2_vdual(path: np.ndarray, times: np.ndarray, dom: DomainSpec) -> float:
    """L^2(0,T;V') norm, trapezoid in time."""
    path, times = _check_path(path, times)
    w = 1.0 + dom.mu**2
    sq = dom.half_length * np.sum(path**2 / w, axis=1)
    return float(np.sqrt(np.trapezoid(sq, times)))


def e_norm(path: np.ndarray, times: np.ndarray, dom: DomainSpec) -> float:
    """Space-time L^4 norm (the fixed-point norm), trapezoid in time."""
    path, times = _check_path(path, times)
    return float(np.trapezoid(l4_norms(path, dom) ** 4, times) ** 0.25)
