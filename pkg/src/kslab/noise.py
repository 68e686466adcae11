"""Q-Wiener forcing and the stochastic convolution.

The covariance operator is diagonal in the sine eigenbasis, so each mode
of the convolution w_A(t) = int_0^t S(t-s) dw(s) is an independent
Ornstein-Uhlenbeck process and can be advanced by its exact Gaussian
transition: no time-discretization bias.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from kslab.spectral import DomainSpec, l4_norms


class DegeneratePathError(ValueError):
    """Raised when a path statistic is undefined (e.g. all increments zero)."""


@dataclass(frozen=True)
class NoiseSpec:
    """Per-mode covariance eigenvalues of the Q-Wiener process.

    By default q_k = sigma^2 k^(-decay_rate); an explicit q vector
    overrides the profile.  decay_rate > 1 keeps the generating profile
    trace class as the mode count grows.
    """

    sigma: float = 0.1
    decay_rate: float = 4.0
    q: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")
        if self.decay_rate <= 1.0:
            raise ValueError("decay_rate must exceed 1 (trace-class profile)")
        if self.q is not None:
            q = np.asarray(self.q, dtype=float)
            if q.ndim != 1 or np.any(q < 0) or not np.all(np.isfinite(q)):
                raise ValueError("explicit q must be a finite nonnegative vector")
            object.__setattr__(self, "q", q)

    def covariance(self, modes: int) -> np.ndarray:
        """Covariance eigenvalues q_1..q_N."""
        if self.q is not None:
            if self.q.shape[0] != modes:
                raise ValueError(f"explicit q has length {self.q.shape[0]}, need {modes}")
            return self.q.copy()
        k = np.arange(1, modes + 1, dtype=float)
        return self.sigma**2 * k ** (-self.decay_rate)


@dataclass(frozen=True)
class ConvolutionState:
    """Current sine coefficients of w_A plus the RNG stream that drives it."""

    time: float
    wa_coeffs: np.ndarray
    stream_id: int = 0

    def __post_init__(self) -> None:
        wa = np.asarray(self.wa_coeffs, dtype=float)
        if not np.all(np.isfinite(wa)):
            raise ValueError("wa_coeffs must be finite")
        object.__setattr__(self, "wa_coeffs", wa)


def make_stream(master_seed: int, stream_id: int) -> np.random.Generator:
    """Deterministic per-path generator from (master seed, path index).

    Distinct stream ids give statistically independent streams; the
    mapping is stable across runs and scheduling order.
    """
    return np.random.default_rng(np.random.SeedSequence(entropy=master_seed, spawn_key=(stream_id,)))


def initial_state(dom: DomainSpec, stream_id: int = 0) -> ConvolutionState:
    """w_A(0) = 0."""
    return ConvolutionState(time=0.0, wa_coeffs=np.zeros(dom.modes), stream_id=stream_id)


def transition_std(h: float, dom: DomainSpec, noise: NoiseSpec) -> np.ndarray:
    """Std dev of the exact one-step OU increment per mode.

    Ito isometry: Var = q_k (1 - e^{2 lambda_k h}) / (2 |lambda_k|);
    computed with expm1 so small lambda*h does not cancel.
    """
    if h <= 0:
        raise ValueError("step size must be positive")
    q = noise.covariance(dom.modes)
    lam = dom.lam
    if np.any(lam >= 0):
        raise ValueError("all eigenvalues must be negative")
    var = q * (-np.expm1(2.0 * lam * h)) / (2.0 * np.abs(lam))
    return np.sqrt(var)


def advance_convolution(
    state: ConvolutionState,
    h: float,
    dom: DomainSpec,
    noise: NoiseSpec,
    rng: np.random.Generator,
) -> ConvolutionState:
    """One exact OU transition: wa <- e^{lambda h} wa + xi, xi ~ N(0, var_h)."""
    std = transition_std(h, dom, noise)
    decay = np.exp(dom.lam * h)
    xi = std * rng.standard_normal(dom.modes)
    return ConvolutionState(
        time=state.time + h,
        wa_coeffs=decay * state.wa_coeffs + xi,
        stream_id=state.stream_id,
    )


def sample_wa_path(
    T: float,
    h: float,
    dom: DomainSpec,
    noise: NoiseSpec,
    rng: np.random.Generator,
    stream_id: int = 0,
) -> list[ConvolutionState]:
    """Snapshots of w_A at t = 0, h, 2h, ..., first one identically zero."""
    if h <= 0 or T < h:
        raise ValueError("need T >= h > 0")
    n_steps = int(round(T / h))
    states = [initial_state(dom, stream_id)]
    for _ in range(n_steps):
        states.append(advance_convolution(states[-1], h, dom, noise, rng))
    return states


def sample_wa_matrix(
    T: float,
    h: float,
    dom: DomainSpec,
    noise: NoiseSpec,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """(times, wa) arrays for a sampled path; wa has shape (steps + 1, N).

    Same transition as advance_convolution (and consumes the stream in the
    same order) but avoids building per-step state objects.
    """
    if h <= 0 or T < h:
        raise ValueError("need T >= h > 0")
    n_steps = int(round(T / h))
    std = transition_std(h, dom, noise)
    decay = np.exp(dom.lam * h)
    wa = np.zeros((n_steps + 1, dom.modes))
    for i in range(n_steps):
        wa[i + 1] = decay * wa[i] + std * rng.standard_normal(dom.modes)
    times = h * np.arange(n_steps + 1)
    return times, wa


def holder_exponent_estimate(path: list[ConvolutionState], dom: DomainSpec) -> float:
    """Estimated temporal Holder exponent of t -> w_A(t) in L^4(I).

    Least-squares slope of log mean-increment-norm against log lag over
    dyadic lags.  A statistical diagnostic only; the analysis provides an
    exponent bound, not a testable equality.
    """
    if len(path) < 16:
        raise ValueError("need at least 16 snapshots")
    times = np.array([s.time for s in path])
    wa = np.stack([s.wa_coeffs for s in path])
    n = len(path)
    lags: list[int] = []
    lag = 1
    while lag <= (n - 1) // 2:
        lags.append(lag)
        lag *= 2
    log_lag = []
    log_inc = []
    for lag in lags:
        diffs = wa[lag:] - wa[:-lag]
        inc = float(np.mean(l4_norms(diffs, dom)))
        if inc <= 0.0:
            raise DegeneratePathError("path has zero increments; exponent undefined")
        log_lag.append(np.log(times[lag] - times[0]))
        log_inc.append(np.log(inc))
    slope = np.polyfit(log_lag, log_inc, 1)[0]
    return float(slope)
