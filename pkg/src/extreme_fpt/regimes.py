"""Regime statistics, thresholds, and classification for the fastest passage time.

The sufficient exponential-regime statistic theta_exp = N exp(-E[tau]/(N t_diff))
certifies the small-N order-statistic description when well below 1; its
closed-form specializations invert exactly through the Lambert W function,
giving the searcher-count threshold N_exp. The large-N side is certified by
theta_gum (delta starts, Gumbel regime) or theta_wei (uniform starts,
Weibull regime), inverted as N_gum and N_wei. Between N_exp and the
applicable large-N threshold the classification is an explicit
"indeterminate": the crossover region carries no sharp theory.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, UnsupportedRegimeError
from .extremes import ExtremeQuery, large_n_law, small_n_law
from .laws import LimitLaw
from .model import AnnulusModel, InitialCondition, mfpt_asymptotic, short_time_coefficients
from .specialfn import lambert_w0

LABEL_EXPONENTIAL = "exponential"
LABEL_GUMBEL = "gumbel"
LABEL_WEIBULL = "weibull-extreme"
LABEL_EXP_EXTREME = "exponential-extreme"
LABEL_INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class RegimeReport:
    """Classification of (model, N) at tolerance theta, with the raw statistics."""

    n: int
    theta: float
    theta_exp: float
    theta_gum: float
    theta_wei: float
    n_exp: float
    n_gum: float
    n_wei: float
    label: str
    recommended_law: LimitLaw
    mfpt: float
    mfpt_source: str  # "supplied" or "asymptotic"


def sufficient_exponential_stat(n: int, mfpt: float, t_diff: float) -> float:
    """theta_exp = N exp(-E[tau]/(N t_diff)); values well below 1 certify the exponential regime."""
    if n < 1 or not mfpt > 0 or not t_diff > 0:
        raise DomainError("need n >= 1, mfpt > 0, t_diff > 0")
    return n * math.exp(-mfpt / (n * t_diff))


def necessary_exponential_violated(n: int, mfpt: float, t_diff: float) -> float:
    """4 ln(N) E[tau]/(N t_diff); values well below 1 rule the exponential regime out.

    Only meaningful when the searchers start a positive distance from the
    target (for touching starts the exponential description can hold at
    every N); the caller asserts that.
    """
    if n < 2:
        raise DomainError(f"the necessary condition needs n >= 2, got {n}")
    if not mfpt > 0 or not t_diff > 0:
        raise DomainError("need mfpt > 0 and t_diff > 0")
    return 4.0 * math.log(n) * mfpt / (n * t_diff)


def spectral_sufficient_stat(n: int, lambda0: float, lambda1: float) -> float:
    """Pre-simplification statistic N exp(-lambda_1/(lambda_0 N)) from the raw spectrum.

    Exposed for diagnostics; classification uses the mean-based statistic.
    """
    if n < 1 or not lambda0 > 0 or not lambda1 > lambda0:
        raise DomainError("need n >= 1 and 0 < lambda0 < lambda1")
    return n * math.exp(-lambda1 / (lambda0 * n))


def _require_slow_regime(model: AnnulusModel) -> None:
    if model.dim == 1 and model.perfect:
        raise UnsupportedRegimeError(
            "dim 1 with a perfect target has no slow regime; no threshold formulas apply"
        )


def theta_exp_stat(model: AnnulusModel, n: float) -> float:
    """Closed-form theta_exp for the annulus cases (the one N_exp inverts).

    Accepts real n so the statistic can be evaluated at the (real-valued)
    thresholds themselves.
    """
    if not n > 0:
        raise DomainError(f"n must be positive, got {n}")
    _require_slow_regime(model)
    if model.perfect:
        if model.dim == 2:
            return n * model.sigma ** (1.0 / (2.0 * n))
        return n * math.exp(-1.0 / (3.0 * n * model.sigma))
    eps = model.dim * model.kappa * model.sigma_pow_dm1
    return n * math.exp(-1.0 / (n * eps))


def theta_gum_stat(model: AnnulusModel, n: float) -> float:
    """theta_gum = -ln(kappa sigma^((d-1)/2)) / ln N for delta starts (kappa factor only when finite)."""
    if not n > 0 or n == 1:
        raise DomainError(f"theta_gum needs positive n != 1, got {n}")
    _require_slow_regime(model)
    s_half = 1.0 if model.dim == 1 else model.sigma ** ((model.dim - 1) / 2.0)
    inner = s_half if model.perfect else model.kappa * s_half
    return -math.log(inner) / math.log(n)


def theta_wei_stat(model: AnnulusModel, n: float) -> float:
    """theta_wei for uniform starts: (d N sigma^(d-1))^-2 perfect, (d N kappa sigma^(d-1))^-1 partial."""
    if not n > 0:
        raise DomainError(f"n must be positive, got {n}")
    if model.perfect:
        return (model.dim * n * model.sigma_pow_dm1) ** -2.0
    return (model.dim * n * model.kappa * model.sigma_pow_dm1) ** -1.0


def n_exp_threshold(model: AnnulusModel, theta: float) -> float:
    """Largest N certified exponential at tolerance theta (Lambert W inversion of theta_exp)."""
    if not 0.0 < theta < 1.0:
        raise DomainError(f"theta must lie in (0, 1), got {theta}")
    _require_slow_regime(model)
    if model.perfect:
        if model.dim == 2:
            minus_log_sigma = -math.log(model.sigma)
            return minus_log_sigma / (2.0 * lambert_w0(minus_log_sigma / (2.0 * theta)))
        return 1.0 / (3.0 * model.sigma * lambert_w0(1.0 / (3.0 * model.sigma * theta)))
    eps = model.dim * model.kappa * model.sigma_pow_dm1
    return 1.0 / (eps * lambert_w0(1.0 / (eps * theta)))


def n_gum_threshold(model: AnnulusModel, theta: float) -> float:
    """Smallest N certified in the Gumbel regime at tolerance theta (delta starts)."""
    if not 0.0 < theta < 1.0:
        raise DomainError(f"theta must lie in (0, 1), got {theta}")
    _require_slow_regime(model)
    s_half = 1.0 if model.dim == 1 else model.sigma ** ((model.dim - 1) / 2.0)
    inner = s_half if model.perfect else model.kappa * s_half
    return inner ** (-1.0 / theta)


def n_wei_threshold(model: AnnulusModel, theta: float) -> float:
    """Smallest N certified in the Weibull regime at tolerance theta (uniform starts)."""
    if not 0.0 < theta < 1.0:
        raise DomainError(f"theta must lie in (0, 1), got {theta}")
    if model.perfect:
        return 1.0 / (model.dim * model.sigma_pow_dm1 * math.sqrt(theta))
    return 1.0 / (model.dim * model.kappa * model.sigma_pow_dm1 * theta)


def n_thresholds(model: AnnulusModel, theta: float) -> tuple[float, float]:
    """(N_exp, N_large): the large-N threshold matching the model's start distribution."""
    n_exp = n_exp_threshold(model, theta)
    if model.initial is InitialCondition.DELTA_AT_OUTER:
        return n_exp, n_gum_threshold(model, theta)
    if model.initial is InitialCondition.UNIFORM:
        return n_exp, n_wei_threshold(model, theta)
    return math.inf, math.inf  # quasi-stationary: exactly exponential at every N


def max_approximation(n: int, mfpt: float, t_diff: float) -> float:
    """max(E[tau]/N, t_diff/(4 ln N)): a serviceable all-N estimate of E[T_N]."""
    if n < 2:
        raise DomainError(f"max_approximation needs n >= 2, got {n}")
    if not mfpt > 0 or not t_diff > 0:
        raise DomainError("need mfpt > 0 and t_diff > 0")
    return max(mfpt / n, t_diff / (4.0 * math.log(n)))


def classify(
    model: AnnulusModel,
    n: int,
    theta: float = 0.5,
    mfpt: float | None = None,
) -> RegimeReport:
    """Label (model, N) as exponential / gumbel / weibull-extreme / exponential-extreme / indeterminate.

    The exponential label applies at N up to N_exp, the extreme labels from
    the start-matched large-N threshold upward, and the gap in between is
    reported as indeterminate with the raw statistics for stricter
    judgement. mfpt defaults to the model's slow-regime asymptotic; the
    report records which source was used.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if mfpt is None:
        mfpt_value = mfpt_asymptotic(model)
        mfpt_source = "asymptotic"
    else:
        if not mfpt > 0:
            raise DomainError(f"mfpt must be positive, got {mfpt}")
        mfpt_value, mfpt_source = mfpt, "supplied"

    query = ExtremeQuery(n=n, k=1)
    if model.initial is InitialCondition.QUASI_STATIONARY:
        # exact exponential at every N; no thresholds apply
        return RegimeReport(
            n=n,
            theta=theta,
            theta_exp=0.0,
            theta_gum=math.inf,
            theta_wei=math.inf,
            n_exp=math.inf,
            n_gum=math.inf,
            n_wei=math.inf,
            label=LABEL_EXPONENTIAL,
            recommended_law=small_n_law(mfpt_value, query),
            mfpt=mfpt_value,
            mfpt_source=mfpt_source,
        )

    n_exp, n_large = n_thresholds(model, theta)
    delta_start = model.initial is InitialCondition.DELTA_AT_OUTER
    theta_exp = theta_exp_stat(model, n)
    theta_gum = theta_gum_stat(model, n) if delta_start and n >= 2 else math.inf
    theta_wei = theta_wei_stat(model, n) if not delta_start else math.inf

    # the delta-start Gumbel description needs log N > 0, so N = 1 can never
    # be placed in that regime no matter where the threshold sits
    if n <= n_exp:
        label = LABEL_EXPONENTIAL
    elif n >= n_large and (not delta_start or n >= 2):
        if delta_start:
            label = LABEL_GUMBEL
        else:
            label = LABEL_WEIBULL if model.perfect else LABEL_EXP_EXTREME
    else:
        label = LABEL_INDETERMINATE

    if label == LABEL_EXPONENTIAL:
        law = small_n_law(mfpt_value, query)
    elif label == LABEL_INDETERMINATE:
        # recommend whichever branch of the max-approximation dominates
        if n >= 2 and mfpt_value / n < model.t_diff / (4.0 * math.log(n)):
            law = large_n_law(short_time_coefficients(model), query)
        else:
            law = small_n_law(mfpt_value, query)
    else:
        law = large_n_law(short_time_coefficients(model), query)

    return RegimeReport(
        n=n,
        theta=theta,
        theta_exp=theta_exp,
        theta_gum=theta_gum if delta_start else math.inf,
        theta_wei=theta_wei,
        n_exp=n_exp,
        n_gum=n_large if delta_start else math.inf,
        n_wei=math.inf if delta_start else n_large,
        label=label,
        recommended_law=law,
        mfpt=mfpt_value,
        mfpt_source=mfpt_source,
    )
