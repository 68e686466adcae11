"""Run configuration: dotted key = value files, env overrides, validation.

The format is deliberately primitive: UTF-8 lines of `section.key = value`,
blank lines and `#` comments allowed, unknown keys are errors.  Any key can
be overridden through the environment as KSLAB_<SECTION>__<KEY> (dot
replaced by a double underscore, upper-cased).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields

import numpy as np

from kslab.noise import NoiseSpec
from kslab.solver import SolverConfig
from kslab.spectral import DomainSpec

ENV_PREFIX = "KSLAB_"


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending key."""


@dataclass(frozen=True)
class RunConfig:
    """Flat snapshot of every tunable, grouped by dotted section."""

    domain_half_length: float = 16.0
    domain_shift: float = 0.5
    domain_modes: int = 64
    noise_sigma: float = 0.1
    noise_decay_rate: float = 4.0
    initial_amplitude: float = 0.1
    initial_mode: int = 1
    solver_dt: float = 1e-3
    solver_t_final: float = 1.0
    solver_picard_tol: float = 1e-10
    solver_picard_max_iters: int = 50
    solver_save_stride: int = 1
    solver_quad_substeps: int = 1
    checks_slack: float = 0.05
    checks_samples: int = 10000
    checks_sweep_paths: int = 100

    def domain(self) -> DomainSpec:
        return DomainSpec(
            half_length=self.domain_half_length,
            shift=self.domain_shift,
            modes=self.domain_modes,
        )

    def noise(self) -> NoiseSpec:
        return NoiseSpec(sigma=self.noise_sigma, decay_rate=self.noise_decay_rate)

    def solver(self) -> SolverConfig:
        return SolverConfig(
            dt=self.solver_dt,
            picard_tol=self.solver_picard_tol,
            picard_max_iters=self.solver_picard_max_iters,
            save_stride=self.solver_save_stride,
            quad_substeps=self.solver_quad_substeps,
        )

    def initial_field(self) -> np.ndarray:
        u0 = np.zeros(self.domain_modes)
        u0[self.initial_mode - 1] = self.initial_amplitude
        return u0

    def as_dict(self) -> dict[str, float | int]:
        return {_attr_to_key(f.name): getattr(self, f.name) for f in fields(self)}


def _attr_to_key(attr: str) -> str:
    section, _, rest = attr.partition("_")
    return f"{section}.{rest}"


_KEY_TO_FIELD = {_attr_to_key(f.name): f for f in fields(RunConfig)}


def _coerce(key: str, raw: str) -> float | int:
    f = _KEY_TO_FIELD[key]
    try:
        if f.type in ("int", int):
            return int(raw)
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse {raw!r} as {f.type}") from exc


def _validate(cfg: RunConfig) -> RunConfig:
    def fail(key: str, why: str) -> None:
        raise ConfigError(f"{key}: {why}")

    if cfg.domain_half_length <= 0:
        fail("domain.half_length", "must be positive")
    if cfg.domain_shift <= 0.25:
        fail("domain.shift", "must exceed 0.25 (keeps the linear operator strictly negative)")
    if cfg.domain_modes < 1:
        fail("domain.modes", "must be at least 1")
    if cfg.noise_sigma < 0:
        fail("noise.sigma", "must be nonnegative")
    if cfg.noise_decay_rate <= 1.0:
        fail("noise.decay_rate", "must exceed 1 (trace-class profile)")
    if not 1 <= cfg.initial_mode <= cfg.domain_modes:
        fail("initial.mode", f"must lie in [1, {cfg.domain_modes}]")
    if cfg.solver_dt <= 0:
        fail("solver.dt", "must be positive")
    if cfg.solver_t_final <= 0:
        fail("solver.t_final", "must be positive")
    if cfg.solver_picard_tol <= 0:
        fail("solver.picard_tol", "must be positive")
    if cfg.solver_picard_max_iters < 1:
        fail("solver.picard_max_iters", "must be at least 1")
    if cfg.solver_save_stride < 1:
        fail("solver.save_stride", "must be at least 1")
    if cfg.solver_quad_substeps < 1:
        fail("solver.quad_substeps", "must be at least 1")
    if cfg.checks_slack < 0:
        fail("checks.slack", "must be nonnegative")
    if cfg.checks_samples < 100:
        fail("checks.samples", "must be at least 100")
    if cfg.checks_sweep_paths < 1:
        fail("checks.sweep_paths", "must be at least 1")
    return cfg


def parse_config_text(text: str) -> dict[str, float | int]:
    """Key/value pairs from config text; unknown keys raise ConfigError."""
    values: dict[str, float | int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {stripped!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in _KEY_TO_FIELD:
            raise ConfigError(f"{key}: unknown configuration key")
        values[key] = _coerce(key, raw)
    return values


def _env_overrides(environ: dict[str, str]) -> dict[str, float | int]:
    values: dict[str, float | int] = {}
    for key in _KEY_TO_FIELD:
        env_name = ENV_PREFIX + key.replace(".", "__").upper()
        if env_name in environ:
            values[key] = _coerce(key, environ[env_name])
    return values


def load_config(path: str | None = None, environ: dict[str, str] | None = None) -> RunConfig:
    """RunConfig from defaults, an optional file, then env overrides."""
    environ = os.environ if environ is None else environ
    values: dict[str, float | int] = {}
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            values.update(parse_config_text(fh.read()))
    values.update(_env_overrides(dict(environ)))
    attrs = {key.replace(".", "_", 1): v for key, v in values.items()}
    return _validate(RunConfig(**attrs))
