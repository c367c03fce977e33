"""Extreme first-passage-time statistics of diffusive search.

Numerical library and CLI for survival probabilities, their spectral
expansions and short-time asymptotics, small-N exponential order-statistic
laws, large-N Weibull/Gumbel limits, the regime thresholds separating
them, and Monte Carlo cross-validation.
"""

from .errors import (
    ConfigError,
    DomainError,
    ExtremeFptError,
    NumericalError,
    UnresolvedEarlyTimeError,
    UnresolvedTailError,
    UnsupportedMomentError,
    UnsupportedRegimeError,
)
from .extremes import ExtremeQuery, large_n_law, large_n_moment, large_n_variance, small_n_law
from .laws import (
    Exponential,
    GeneralizedGamma,
    Gumbel,
    LimitLaw,
    RenyiOrderStat,
    Weibull,
    kth_fastest_survival,
)
from .mc import EmpiricalOrderStats, SimConfig, sample_fastest, simulate_fpt, simulate_fpt_batch
from .mesh import GridSpec
from .model import (
    AnnulusModel,
    InitialCondition,
    NarrowEscapeSphereModel,
    OUWellModel,
    ShortTimeAsymptotics,
    appendix_short_time_coefficients,
    mfpt_asymptotic,
    ou_higher_eigenvalue_asymptotic,
    principal_eigenvalue_asymptotic,
    short_time_coefficients,
)
from .pde import SurvivalCurve, TimeSpec, default_time_spec, mean_fpt, mean_kth_fastest, solve_survival
from .regimes import (
    RegimeReport,
    classify,
    max_approximation,
    n_thresholds,
    necessary_exponential_violated,
    sufficient_exponential_stat,
)
from .spectral import (
    EigenSystem,
    SpectralCoefficients,
    eigenpairs,
    eta_error,
    expansion_coefficients,
    quasi_stationary_density,
    survival_from_expansion,
)

__version__ = "0.1.0"

__all__ = [
    "AnnulusModel",
    "ConfigError",
    "DomainError",
    "EigenSystem",
    "EmpiricalOrderStats",
    "Exponential",
    "ExtremeFptError",
    "ExtremeQuery",
    "GeneralizedGamma",
    "GridSpec",
    "Gumbel",
    "InitialCondition",
    "LimitLaw",
    "NarrowEscapeSphereModel",
    "NumericalError",
    "OUWellModel",
    "RegimeReport",
    "RenyiOrderStat",
    "ShortTimeAsymptotics",
    "SimConfig",
    "SpectralCoefficients",
    "SurvivalCurve",
    "TimeSpec",
    "UnresolvedEarlyTimeError",
    "UnresolvedTailError",
    "UnsupportedMomentError",
    "UnsupportedRegimeError",
    "Weibull",
    "appendix_short_time_coefficients",
    "classify",
    "default_time_spec",
    "eigenpairs",
    "eta_error",
    "expansion_coefficients",
    "kth_fastest_survival",
    "large_n_law",
    "large_n_moment",
    "large_n_variance",
    "max_approximation",
    "mean_fpt",
    "mean_kth_fastest",
    "mfpt_asymptotic",
    "n_thresholds",
    "necessary_exponential_violated",
    "ou_higher_eigenvalue_asymptotic",
    "principal_eigenvalue_asymptotic",
    "quasi_stationary_density",
    "sample_fastest",
    "short_time_coefficients",
    "simulate_fpt",
    "simulate_fpt_batch",
    "small_n_law",
    "solve_survival",
    "sufficient_exponential_stat",
    "survival_from_expansion",
]
