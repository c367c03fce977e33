"""Limiting laws and asymptotic moments of the k-th fastest passage time.

Two regimes: for small searcher counts a near-exponential single-searcher
time makes the ordered passage times follow the exponential order-statistic
(spacings) law; for large counts the limit is read off the early-time
coefficients (A, p, C) of the single-searcher distribution. C = 0 gives a
Weibull (k = 1) or generalized Gamma (k >= 2) limit; C > 0 gives a Gumbel
limit with explicit centering and scaling sequences.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, UnsupportedMomentError, UnsupportedRegimeError
from .laws import (
    EULER_GAMMA,
    Exponential,
    GeneralizedGamma,
    Gumbel,
    LimitLaw,
    RenyiOrderStat,
    Weibull,
)
from .model import ShortTimeAsymptotics
from .specialfn import gamma_fn


@dataclass(frozen=True)
class ExtremeQuery:
    """Which extreme is requested: k-th fastest of n searchers."""

    n: int
    k: int = 1

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError(f"searcher count n must be >= 1, got {self.n}")
        if not 1 <= self.k <= self.n:
            raise DomainError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")


def small_n_law(mfpt: float, query: ExtremeQuery) -> LimitLaw:
    """Order-statistic law when each searcher is (near-)exponential with mean mfpt.

    The k = 1 case is plain Exp(mfpt/n); general k is the spacings sum
    sum_{j<=k} X_j / (n - j + 1) over the rate 1/mfpt.
    """
    if not mfpt > 0:
        raise DomainError(f"mfpt must be positive, got {mfpt}")
    if query.k == 1:
        return Exponential(mean=mfpt / query.n)
    return RenyiOrderStat(rate=1.0 / mfpt, n=query.n, k=query.k)


def _gumbel_sequences(st: ShortTimeAsymptotics, n: int) -> tuple[float, float]:
    log_n = math.log(n)
    a_n = st.gap / log_n**2
    # ln(A C^p) evaluated as ln A + p ln C so tiny gaps cannot overflow the power
    log_acp = math.log(st.amp) + st.power * math.log(st.gap)
    b_n = st.gap / log_n + st.gap * st.power * math.log(log_n) / log_n**2 - st.gap * log_acp / log_n**2
    return b_n, a_n


def large_n_law(st: ShortTimeAsymptotics, query: ExtremeQuery) -> LimitLaw:
    """Limiting law of T_{k,n} as n grows, from the early-time coefficients.

    C = 0: (A n)^(1/p) T_{k,n} tends to a generalized Gamma (Weibull for
    k = 1). C > 0: (T_n - b_n)/a_n tends to a standard minimum Gumbel; the
    k >= 2 analogue is known but intentionally not implemented here.
    """
    if st.gap == 0.0:
        scale = (st.amp * query.n) ** (-1.0 / st.power)
        if query.k == 1:
            return Weibull(scale=scale, shape=st.power)
        return GeneralizedGamma(scale=scale, shape=st.power, order=query.k)
    if query.k != 1:
        raise UnsupportedRegimeError(
            "the Gumbel-regime law for k >= 2 is not implemented (see Lawley 2020, "
            "'Distribution of extreme first passage times of diffusion')"
        )
    if query.n < 2:
        raise DomainError("the Gumbel limit needs n >= 2 (log n must be positive)")
    b_n, a_n = _gumbel_sequences(st, query.n)
    return Gumbel(location=b_n, scale=a_n)


def large_n_moment(
    st: ShortTimeAsymptotics,
    query: ExtremeQuery,
    m: float = 1.0,
    leading_only: bool = False,
) -> float:
    """Asymptotic E[(T_{k,n})^m] including every displayed correction term.

    For C = 0 this is Gamma(k + m/p)/Gamma(k) / (A n)^(m/p) for any m > 0.
    For C > 0 only m in {1, 2} is available: the mean b_n - gamma a_n (or
    just C/ln n with leading_only) and the matching raw second moment.
    """
    if not m > 0:
        raise DomainError(f"moment order must be positive, got {m}")
    if st.gap == 0.0:
        k = float(query.k)
        return gamma_fn(k + m / st.power) / gamma_fn(k) / (st.amp * query.n) ** (m / st.power)
    if query.k != 1:
        raise UnsupportedRegimeError("Gumbel-regime moments are only implemented for k = 1")
    if query.n < 2:
        raise DomainError("the Gumbel limit needs n >= 2")
    b_n, a_n = _gumbel_sequences(st, query.n)
    if leading_only:
        if m != 1:
            raise UnsupportedMomentError("leading-order shortcut only defined for the mean")
        return st.gap / math.log(query.n)
    mean = b_n - EULER_GAMMA * a_n
    if m == 1:
        return mean
    if m == 2:
        return math.pi**2 / 6.0 * a_n**2 + mean**2
    raise UnsupportedMomentError(f"Gumbel-regime moments implemented for m in {{1, 2}}, got {m}")


def large_n_variance(st: ShortTimeAsymptotics, query: ExtremeQuery) -> float:
    """Asymptotic variance of T_{k,n}; pi^2 C^2/(6 (ln n)^4) in the Gumbel regime."""
    if st.gap > 0.0:
        if query.k != 1:
            raise UnsupportedRegimeError("Gumbel-regime moments are only implemented for k = 1")
        return math.pi**2 / 6.0 * (st.gap / math.log(query.n) ** 2) ** 2
    m1 = large_n_moment(st, query, 1.0)
    return large_n_moment(st, query, 2.0) - m1 * m1
