"""Probability laws for fastest-passage statistics.

Each law is an immutable value with the same three operations: survival
P(X > x), raw moments E[X^m], and inverse-CDF (or constructive) sampling.
The RenyiOrderStat law is the limiting distribution of the k-th order
statistic of n iid exponentials, evaluated through the exact binomial
order-statistic identity rather than the (unstable) hypoexponential
partial-fraction form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnsupportedMomentError
from .specialfn import EULER_GAMMA, gamma_fn, regularized_upper_gamma


def kth_fastest_survival(single_survival, n: int, k: int):
    """P(T_{k,n} > t) from single-searcher survival values S(t).

    Evaluates sum_{j<k} C(n,j) (1-S)^j S^(n-j) in log space so it stays
    finite for n up to 1e8 and S arbitrarily close to 0 or 1.
    """
    if k < 1 or k > n:
        raise DomainError(f"need 1 <= k <= n, got k={k}, n={n}")
    s = np.asarray(single_survival, dtype=float)
    out = np.float_power(s, n)
    if k > 1:
        with np.errstate(divide="ignore"):
            ls = np.log(s)
            l1ms = np.log1p(-s)
        lcomb = 0.0
        for j in range(1, k):
            lcomb += math.log(n - j + 1) - math.log(j)
            out = out + np.exp(lcomb + j * l1ms + (n - j) * ls)
    if np.isscalar(single_survival) or np.ndim(single_survival) == 0:
        return float(out)
    return out


def _check_nonnegative(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0):
        raise DomainError("survival of a nonnegative law requires x >= 0")
    return arr


def _as_input_shape(values: np.ndarray, x):
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(values)
    return values


@dataclass(frozen=True)
class Exponential:
    """Exponential law with the given mean (rate 1/mean)."""

    mean: float

    def __post_init__(self) -> None:
        if not self.mean > 0:
            raise DomainError(f"Exponential mean must be positive, got {self.mean}")

    def survival(self, x):
        arr = _check_nonnegative(x)
        return _as_input_shape(np.exp(-arr / self.mean), x)

    def moment(self, m: float) -> float:
        if not m > 0:
            raise DomainError("moment order must be positive")
        return self.mean**m * gamma_fn(1.0 + m)

    def sample(self, rng: np.random.Generator, size=None):
        return rng.exponential(self.mean, size=size)


@dataclass(frozen=True)
class Weibull:
    """Weibull law: P(X > x) = exp(-(x/scale)^shape)."""

    scale: float
    shape: float

    def __post_init__(self) -> None:
        if not self.scale > 0:
            raise DomainError(f"Weibull scale must be positive, got {self.scale}")
        if not self.shape > 0:
            raise DomainError(f"Weibull shape must be positive, got {self.shape}")

    def survival(self, x):
        arr = _check_nonnegative(x)
        return _as_input_shape(np.exp(-((arr / self.scale) ** self.shape)), x)

    def moment(self, m: float) -> float:
        if not m > 0:
            raise DomainError("moment order must be positive")
        return self.scale**m * gamma_fn(1.0 + m / self.shape)

    def sample(self, rng: np.random.Generator, size=None):
        return self.scale * rng.exponential(1.0, size=size) ** (1.0 / self.shape)


@dataclass(frozen=True)
class GeneralizedGamma:
    """Generalized Gamma law: P(X > x) = Gamma(order, (x/scale)^shape) / Gamma(order).

    With order = 1 this is survival-identical to Weibull(scale, shape).
    """

    scale: float
    shape: float
    order: int

    def __post_init__(self) -> None:
        if not self.scale > 0:
            raise DomainError(f"GeneralizedGamma scale must be positive, got {self.scale}")
        if not self.shape > 0:
            raise DomainError(f"GeneralizedGamma shape must be positive, got {self.shape}")
        if self.order < 1 or int(self.order) != self.order:
            raise DomainError(f"GeneralizedGamma order must be a positive integer, got {self.order}")

    def survival(self, x):
        arr = _check_nonnegative(x)
        z = (arr / self.scale) ** self.shape
        vals = np.array([regularized_upper_gamma(self.order, zi) for zi in np.atleast_1d(z)])
        return _as_input_shape(vals.reshape(np.shape(arr)), x)

    def moment(self, m: float) -> float:
        if not m > 0:
            raise DomainError("moment order must be positive")
        k = float(self.order)
        return self.scale**m * gamma_fn(k + m / self.shape) / gamma_fn(k)

    def sample(self, rng: np.random.Generator, size=None):
        # sum of `order` unit exponentials, then the 1/shape power
        g = rng.gamma(shape=float(self.order), scale=1.0, size=size)
        return self.scale * g ** (1.0 / self.shape)


@dataclass(frozen=True)
class Gumbel:
    """Minimum-convention Gumbel law: P(X > x) = exp(-exp((x - location)/scale)).

    The mean is location - gamma * scale with gamma the Euler-Mascheroni
    constant, matching the fastest-arrival limit it approximates.
    """

    location: float
    scale: float

    def __post_init__(self) -> None:
        if not self.scale > 0:
            raise DomainError(f"Gumbel scale must be positive, got {self.scale}")

    def survival(self, x):
        arr = np.asarray(x, dtype=float)
        z = np.clip((arr - self.location) / self.scale, None, 700.0)
        return _as_input_shape(np.exp(-np.exp(z)), x)

    def mean(self) -> float:
        return self.location - EULER_GAMMA * self.scale

    def variance(self) -> float:
        return math.pi**2 / 6.0 * self.scale**2

    def moment(self, m: float) -> float:
        if m == 1:
            return self.mean()
        if m == 2:
            return self.variance() + self.mean() ** 2
        raise UnsupportedMomentError(f"Gumbel moments implemented for m in {{1, 2}}, got {m}")

    def sample(self, rng: np.random.Generator, size=None):
        return self.location + self.scale * np.log(rng.exponential(1.0, size=size))


@dataclass(frozen=True)
class RenyiOrderStat:
    """k-th order statistic of n iid exponentials with the given rate.

    Equal in distribution to sum_{j=1}^{k} X_j / (rate (n - j + 1)) with
    X_j iid unit exponentials (the spacings decomposition).
    """

    rate: float
    n: int
    k: int

    def __post_init__(self) -> None:
        if not self.rate > 0:
            raise DomainError(f"RenyiOrderStat rate must be positive, got {self.rate}")
        if self.n < 1:
            raise DomainError(f"RenyiOrderStat n must be >= 1, got {self.n}")
        if not 1 <= self.k <= self.n:
            raise DomainError(f"RenyiOrderStat needs 1 <= k <= n, got k={self.k}, n={self.n}")

    def survival(self, x):
        arr = _check_nonnegative(x)
        single = np.exp(-self.rate * arr)
        vals = kth_fastest_survival(single, self.n, self.k)
        return _as_input_shape(np.asarray(vals), x)

    def mean(self) -> float:
        return sum(1.0 / (self.rate * (self.n - j + 1)) for j in range(1, self.k + 1))

    def variance(self) -> float:
        return sum((1.0 / (self.rate * (self.n - j + 1))) ** 2 for j in range(1, self.k + 1))

    def moment(self, m: float) -> float:
        if m == 1:
            return self.mean()
        if m == 2:
            return self.variance() + self.mean() ** 2
        raise UnsupportedMomentError(f"RenyiOrderStat moments implemented for m in {{1, 2}}, got {m}")

    def sample(self, rng: np.random.Generator, size=None):
        shape = (self.k,) if size is None else (self.k,) + tuple(np.atleast_1d(size))
        draws = rng.exponential(1.0, size=shape)
        weights = np.array([1.0 / (self.rate * (self.n - j + 1)) for j in range(1, self.k + 1)])
        total = np.tensordot(weights, draws, axes=(0, 0))
        return float(total) if size is None else total


LimitLaw = Exponential | Weibull | GeneralizedGamma | Gumbel | RenyiOrderStat

_LAW_TAGS = {
    Exponential: "exponential",
    Weibull: "weibull",
    GeneralizedGamma: "generalized_gamma",
    Gumbel: "gumbel",
    RenyiOrderStat: "renyi_order_stat",
}


def law_to_record(law: LimitLaw) -> dict:
    """Serialize a law to a flat {type, params...} record for CSV/JSON output."""
    record = {"type": _LAW_TAGS[type(law)]}
    record.update({k: v for k, v in law.__dict__.items()})
    return record


def law_from_record(record: dict) -> LimitLaw:
    """Rebuild a law from a record produced by law_to_record."""
    by_tag = {tag: cls for cls, tag in _LAW_TAGS.items()}
    params = {k: v for k, v in record.items() if k != "type"}
    cls = by_tag[record["type"]]
    for field in ("n", "k", "order"):
        if field in params:
            params[field] = int(params[field])
    return cls(**{k: (float(v) if k not in ("n", "k", "order") else v) for k, v in params.items()})
