"""Spectral-Galerkin simulation and verification lab for the stochastic
Kuramoto-Sivashinsky equation on a bounded interval with additive
trace-class noise."""

from kslab.spectral import (
    DomainSpec,
    NormReport,
    apply_semigroup,
    eigenvalue,
    eigenvalues,
    fractional_power_apply,
    from_grid,
    hs_norm,
    nonlinear_G,
    norms,
    quadratic_term,
    to_grid,
)
from kslab.noise import (
    ConvolutionState,
    NoiseSpec,
    advance_convolution,
    holder_exponent_estimate,
    make_stream,
    sample_wa_path,
)
from kslab.solver import (
    PicardResult,
    SolverConfig,
    Trajectory,
    apply_F,
    picard_cross_check,
    picard_solve,
    solve_global,
    step_exponential_euler,
    tau_one,
    tau_two,
)
from kslab.estimates import (
    CheckReport,
    ConstantsLedger,
    calibrate_constants,
    check_continuous_dependence,
    check_embedding,
    check_energy,
    check_F_contraction,
    check_G_lipschitz,
    check_semigroup_regularity,
)

__version__ = "0.1.0"

__all__ = [
    "DomainSpec",
    "NormReport",
    "NoiseSpec",
    "ConvolutionState",
    "SolverConfig",
    "Trajectory",
    "PicardResult",
    "ConstantsLedger",
    "CheckReport",
    "eigenvalue",
    "eigenvalues",
    "apply_semigroup",
    "to_grid",
    "from_grid",
    "norms",
    "hs_norm",
    "nonlinear_G",
    "quadratic_term",
    "fractional_power_apply",
    "make_stream",
    "advance_convolution",
    "sample_wa_path",
    "holder_exponent_estimate",
    "apply_F",
    "tau_one",
    "tau_two",
    "picard_solve",
    "picard_cross_check",
    "step_exponential_euler",
    "solve_global",
    "calibrate_constants",
    "check_embedding",
    "check_semigroup_regularity",
    "check_G_lipschitz",
    "check_F_contraction",
    "check_energy",
    "check_continuous_dependence",
    "__version__",
]
