"""Search-problem definitions and their closed-form asymptotics.

Three model families are supported: a d-dimensional annulus with a target
at the inner radius (perfectly or partially absorbing), escape from a
quadratic potential well over the boundary of a ball, and the small-target
narrow-escape sphere problem. Every asymptotic attached to them here is a
leading-order formula valid in the model's slow regime; the PDE and
spectral solvers provide the non-asymptotic ground truth.

Unit conventions: each model carries its diffusion time t_diff in the
user's time unit and all returned times/rates use that unit. The annulus
short-time coefficients exist in two equivalent parameterizations: the
primary one (time measured in the user's unit, t_diff explicit) and an
outer-radius one (time unit R^2/D) used by the Laplace-transform route;
`ShortTimeAsymptotics.rescaled` converts between them.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError, UnsupportedRegimeError
from .specialfn import gamma_fn

_SQRT_PI = math.sqrt(math.pi)


class InitialCondition(enum.Enum):
    """Where the searchers start."""

    DELTA_AT_OUTER = "delta"  # all searchers at the outer (reflecting) radius
    UNIFORM = "uniform"  # uniformly distributed over the domain volume
    QUASI_STATIONARY = "quasistationary"  # ground-state density u0*rho/N


@dataclass(frozen=True)
class ShortTimeAsymptotics:
    """Coefficients of the early-time law P(tau <= t) ~ amp * t^power * exp(-gap/t)."""

    amp: float
    power: float
    gap: float

    def __post_init__(self) -> None:
        if not self.amp > 0:
            raise DomainError(f"short-time amplitude must be positive, got {self.amp}")
        if self.gap < 0:
            raise DomainError(f"short-time gap must be nonnegative, got {self.gap}")

    def evaluate(self, t):
        """The asymptotic value of P(tau <= t) at time t (same unit as the coefficients)."""
        arr = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.zeros_like(arr)
        pos = arr > 0
        out[pos] = self.amp * arr[pos] ** self.power * np.exp(-self.gap / arr[pos])
        return float(out[0]) if np.ndim(t) == 0 else out

    def rescaled(self, old_per_new: float) -> "ShortTimeAsymptotics":
        """Re-express the coefficients in a new time unit.

        old_per_new is how many old time units make one new unit, i.e.
        t_old = old_per_new * t_new.
        """
        if not old_per_new > 0:
            raise DomainError("time unit ratio must be positive")
        return replace(
            self,
            amp=self.amp * old_per_new**self.power,
            gap=self.gap / old_per_new,
        )


@dataclass(frozen=True)
class AnnulusModel:
    """Diffusive search in the annulus a < |x| < R, target at the inner radius.

    sigma = a/R is the dimensionless target radius, kappa = k_on*(R-a)/D the
    dimensionless reactivity (math.inf for a perfect target), and t_diff =
    (R-a)^2/D the diffusion time in the user's unit. For dim = 1 the domain
    is the interval (sigma*R, R); the classical setup takes sigma = 0 there,
    but sigma > 0 is accepted (all sigma^(d-1) factors are then just 1).
    """

    dim: int
    sigma: float
    kappa: float
    initial: InitialCondition = InitialCondition.DELTA_AT_OUTER
    t_diff: float = 1.0

    def __post_init__(self) -> None:
        if self.dim not in (1, 2, 3):
            raise DomainError(f"annulus dim must be 1, 2, or 3, got {self.dim}")
        if not 0.0 <= self.sigma < 1.0:
            raise DomainError(f"sigma must lie in [0, 1), got {self.sigma}")
        if self.dim >= 2 and self.sigma == 0.0:
            raise DomainError("sigma must be positive for dim >= 2 (point targets are invisible)")
        if not self.kappa > 0:
            raise DomainError(f"kappa must be positive (math.inf allowed), got {self.kappa}")
        if not self.t_diff > 0:
            raise DomainError(f"t_diff must be positive, got {self.t_diff}")
        if not isinstance(self.initial, InitialCondition):
            raise DomainError(f"initial must be an InitialCondition, got {self.initial!r}")

    @property
    def perfect(self) -> bool:
        return math.isinf(self.kappa)

    @property
    def kappa_bar(self) -> float:
        """Reactivity in the outer-radius nondimensionalization, k_on*R/D."""
        return self.kappa / (1.0 - self.sigma)

    @property
    def sigma_pow_dm1(self) -> float:
        """sigma^(d-1) with the dim = 1 convention sigma^0 = 1."""
        if self.dim == 1:
            return 1.0
        return self.sigma ** (self.dim - 1)

    @property
    def geometry_factor(self) -> float:
        """(1 - sigma^d)/(1 - sigma); equals 1 identically for dim = 1."""
        if self.dim == 1:
            return 1.0
        return (1.0 - self.sigma**self.dim) / (1.0 - self.sigma)

    @property
    def case_id(self) -> int:
        """Case number 1-4: delta/uniform start x perfect/partial target."""
        delta = self.initial is InitialCondition.DELTA_AT_OUTER
        if self.perfect:
            return 1 if delta else 3
        return 2 if delta else 4


@dataclass(frozen=True)
class OUWellModel:
    """Escape of an Ornstein-Uhlenbeck process from the ball |x| < L.

    eps = 2D/(well_stiffness * L^2) measures noise against the well depth;
    the whole sphere |x| = L absorbs. t_diff = L^2/D in the user's unit.
    """

    dim: int
    eps: float
    well_stiffness: float = 1.0
    t_diff: float = 1.0

    def __post_init__(self) -> None:
        if self.dim < 1 or int(self.dim) != self.dim:
            raise DomainError(f"OU dim must be a positive integer, got {self.dim}")
        if not self.eps > 0:
            raise DomainError(f"eps must be positive, got {self.eps}")
        if not self.well_stiffness > 0:
            raise DomainError(f"well_stiffness must be positive, got {self.well_stiffness}")
        if not self.t_diff > 0:
            raise DomainError(f"t_diff must be positive, got {self.t_diff}")


@dataclass(frozen=True)
class NarrowEscapeSphereModel:
    """Narrow escape to M spherical targets of dimensionless radius sigma.

    Carries only the quantities entering the leading-order principal
    eigenvalue: target count, radius scale r, sigma, domain volume, and
    diffusivity. Target positions do not enter at this order. The bounded
    isoperimetric-ratio assumption is asserted by the caller, not checked.
    """

    dim: int
    num_targets: int
    target_radius: float
    sigma: float
    domain_volume: float
    diffusivity: float

    def __post_init__(self) -> None:
        if self.dim not in (2, 3):
            raise DomainError(f"narrow escape dim must be 2 or 3, got {self.dim}")
        if self.num_targets < 1:
            raise DomainError(f"num_targets must be >= 1, got {self.num_targets}")
        for name in ("target_radius", "sigma", "domain_volume", "diffusivity"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if not self.sigma < 1:
            raise DomainError(f"sigma must lie in (0, 1), got {self.sigma}")

    @property
    def t_diff(self) -> float:
        """Diffusion time of the narrow-escape scaling: |Omega|/(pi D) in 2D, |Omega|/((4/3) pi r D) in 3D."""
        if self.dim == 2:
            return self.domain_volume / (math.pi * self.diffusivity)
        return self.domain_volume / (4.0 / 3.0 * math.pi * self.target_radius * self.diffusivity)


Model = AnnulusModel | OUWellModel | NarrowEscapeSphereModel


def principal_eigenvalue_asymptotic(model: Model) -> float:
    """Leading-order principal eigenvalue (the slow decay rate) of the model."""
    if isinstance(model, NarrowEscapeSphereModel):
        if model.dim == 2:
            return -2.0 * math.pi * model.diffusivity * model.num_targets / (
                model.domain_volume * math.log(model.sigma)
            )
        return 4.0 * math.pi * model.diffusivity * model.num_targets * model.target_radius * model.sigma / (
            model.domain_volume
        )
    if isinstance(model, OUWellModel):
        e = model.eps
        return 4.0 * math.exp(-1.0 / e) / (model.t_diff * gamma_fn(model.dim / 2.0) * e ** (model.dim / 2.0 + 1.0))
    return 1.0 / mfpt_asymptotic(model)


def mfpt_asymptotic(model: Model) -> float:
    """Leading-order mean first passage time of a single searcher."""
    if isinstance(model, NarrowEscapeSphereModel):
        return 1.0 / principal_eigenvalue_asymptotic(model)
    if isinstance(model, OUWellModel):
        e = model.eps
        return model.t_diff * gamma_fn(model.dim / 2.0) / 4.0 * e ** (model.dim / 2.0 + 1.0) * math.exp(1.0 / e)
    if model.perfect:
        if model.dim == 1:
            raise UnsupportedRegimeError(
                "a perfectly absorbing target in dim 1 has no slow regime; use the PDE solver"
            )
        if model.dim == 2:
            return -model.t_diff * math.log(model.sigma) / 2.0
        return model.t_diff / (3.0 * model.sigma)
    geom = (1.0 - model.sigma**model.dim) / (1.0 - model.sigma) ** 2 if model.dim > 1 else 1.0 / (1.0 - model.sigma)
    return model.t_diff * geom / (model.dim * model.kappa * model.sigma_pow_dm1)


def ou_higher_eigenvalue_asymptotic(model: OUWellModel, n: int) -> float:
    """Deep-well divergence of the higher eigenvalues: lambda_n ~ 4n/(eps t_diff)."""
    if n < 1 or int(n) != n:
        raise DomainError(f"eigenvalue index must be a positive integer, got {n}")
    return 4.0 * n / (model.eps * model.t_diff)


def short_time_coefficients(model: AnnulusModel) -> ShortTimeAsymptotics:
    """Early-time (A, p, C) of the annulus survival in the model's time unit.

    The four start/reactivity cases have distinct laws: a delta start a
    positive distance from the target carries gap C = t_diff/4, a uniform
    start touches the target and has C = 0; a perfect target contributes a
    half power of t less than a partially absorbing one.
    """
    if model.initial is InitialCondition.QUASI_STATIONARY:
        raise UnsupportedRegimeError(
            "the quasi-stationary start is purely exponential; take its rate from the spectral module"
        )
    td = model.t_diff
    s_half = model.sigma_pow_dm1 if model.dim == 1 else model.sigma ** ((model.dim - 1) / 2.0)
    if model.initial is InitialCondition.DELTA_AT_OUTER:
        if model.perfect:
            return ShortTimeAsymptotics(2.0 / _SQRT_PI / math.sqrt(td) * s_half, 0.5, td / 4.0)
        return ShortTimeAsymptotics(4.0 / _SQRT_PI * td**-1.5 * model.kappa * s_half, 1.5, td / 4.0)
    inv_geom = 1.0 / model.geometry_factor  # (1 - sigma)/(1 - sigma^d)
    if model.perfect:
        amp = 2.0 * model.dim * inv_geom * model.sigma_pow_dm1 / (_SQRT_PI * math.sqrt(td))
        return ShortTimeAsymptotics(amp, 0.5, 0.0)
    amp = model.dim * inv_geom * model.kappa * model.sigma_pow_dm1 / td
    return ShortTimeAsymptotics(amp, 1.0, 0.0)


def appendix_short_time_coefficients(model: AnnulusModel, start_radius: float) -> ShortTimeAsymptotics:
    """Early-time (A, p, C) for a start at radius r in (sigma, 1], outer-radius units.

    These come from the exact Laplace-transform solution of the annulus
    problem and are expressed in the time unit R^2/D; rescale by
    (1 - sigma)^2 / t_diff to recover the primary coefficients at r = 1.
    """
    if not model.sigma < start_radius <= 1.0:
        raise DomainError(f"start_radius must lie in (sigma, 1], got {start_radius}")
    r, s = start_radius, model.sigma
    ratio_half = 1.0 if model.dim == 1 else (s / r) ** ((model.dim - 1) / 2.0)
    gap = (r - s) ** 2 / 4.0
    if model.perfect:
        return ShortTimeAsymptotics(2.0 / (_SQRT_PI * (r - s)) * ratio_half, 0.5, gap)
    return ShortTimeAsymptotics(4.0 * model.kappa_bar / (_SQRT_PI * (r - s) ** 2) * ratio_half, 1.5, gap)
