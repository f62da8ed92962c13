"""Closed-form solver and Monte Carlo validator for two-armed Lévy bandits."""

from .alpha_solver import RootResult, f_eval, f_prime, solve_alpha, solve_beta
from .belief import (
    BoundaryParams,
    Posterior,
    boundary_params,
    jump_update,
    posterior_from_history,
)
from .bias import BiasVerdict, Regime, Verdict, biased_value, compare_bias, compare_bias_geometric
from .errors import (
    BanditError,
    BoundaryMismatch,
    ConfigError,
    DomainError,
    NoSignChange,
    NumericError,
    PreconditionError,
    RangeError,
    SchemaError,
    ValidationError,
)
from .info import (
    InfoProblem,
    InfoValueProfile,
    SignalStream,
    info_optimal_cutoff,
    info_value,
    price_of_information,
    validate_info,
)
from .measure import BanditProblem, JumpAtom, LevyArmType, expected_rate, validate
from .misprior import MispriorInput, misprior_value
from .sim import SimConfig, SimEstimate, SimOutcome, dump_path, estimate_value, simulate_path
from .valuation import ValueProfile, build_profile, fde_residual, value, value_curve

__version__ = "0.1.0"

__all__ = [
    "BanditError",
    "BanditProblem",
    "BiasVerdict",
    "BoundaryMismatch",
    "BoundaryParams",
    "ConfigError",
    "DomainError",
    "InfoProblem",
    "InfoValueProfile",
    "JumpAtom",
    "LevyArmType",
    "MispriorInput",
    "NoSignChange",
    "NumericError",
    "Posterior",
    "PreconditionError",
    "RangeError",
    "Regime",
    "RootResult",
    "SchemaError",
    "SignalStream",
    "SimConfig",
    "SimEstimate",
    "SimOutcome",
    "ValidationError",
    "ValueProfile",
    "Verdict",
    "biased_value",
    "boundary_params",
    "build_profile",
    "compare_bias",
    "compare_bias_geometric",
    "dump_path",
    "estimate_value",
    "expected_rate",
    "f_eval",
    "f_prime",
    "fde_residual",
    "info_optimal_cutoff",
    "info_value",
    "jump_update",
    "misprior_value",
    "posterior_from_history",
    "price_of_information",
    "simulate_path",
    "solve_alpha",
    "solve_beta",
    "validate",
    "validate_info",
    "value",
    "value_curve",
]
