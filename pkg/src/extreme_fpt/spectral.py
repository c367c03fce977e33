"""Radial Sturm-Liouville eigensolver and spectral survival expansions.

Shares the flux-form discretization with the PDE solver, so the discrete
operator is symmetric under the rho r^(d-1)-weighted inner product by
construction and its spectrum is real, positive, and ordered. The lowest
modes come from LAPACK's bisection + inverse-iteration tridiagonal path.

Everything downstream of the eigenpairs is a finite sum: expansion
coefficients A_n, the survival series S(t) = sum A_n exp(-lambda_n t), the
quasi-stationary start density, and the deviation-from-exponential error
term eta used by the regime conditions.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import DomainError, NumericalError
from .mesh import GridSpec, assemble
from .model import AnnulusModel, InitialCondition, OUWellModel
from .pde import SurvivalCurve


@dataclass
class EigenSystem:
    """Lowest eigenpairs of the radial generator, weighted-orthonormal.

    Eigenfunctions are sampled on the full node set (zero on an eliminated
    Dirichlet node) and normalized so that sum_i u_n(r_i) u_m(r_i) w_i is
    the Kronecker delta, with w the dual-cell masses of rho r^(d-1).
    """

    eigenvalues: np.ndarray  # ascending rates, model time unit
    eigenfunctions: np.ndarray  # shape (n_modes, n_nodes)
    r: np.ndarray
    rho_mass: np.ndarray  # discrete weighted measure, all nodes
    unif_mass: np.ndarray
    delta_node: int

    @property
    def n_modes(self) -> int:
        return self.eigenvalues.shape[0]

    def weighted_inner(self, f: np.ndarray, g: np.ndarray) -> float:
        return float(np.sum(f * g * self.rho_mass))

    def to_csv(self, path: str | Path, coefficients: "SpectralCoefficients | None" = None) -> None:
        """Write `n,lambda_n[,A_n]` rows at full precision."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            if coefficients is None:
                writer.writerow(["n", "lambda_n"])
                for i, lam in enumerate(self.eigenvalues):
                    writer.writerow([i, f"{lam:.17g}"])
            else:
                writer.writerow(["n", "lambda_n", "A_n"])
                for i, (lam, a) in enumerate(zip(self.eigenvalues, coefficients.values)):
                    writer.writerow([i, f"{lam:.17g}", f"{a:.17g}"])


@dataclass
class SpectralCoefficients:
    """Expansion coefficients A_n of the survival series."""

    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)

    @property
    def tail_bound(self) -> float:
        """|1 - sum A_n|: the exact total of all truncated coefficients."""
        return abs(1.0 - float(self.values.sum()))


def eigenpairs(model: AnnulusModel | OUWellModel, n_max: int, grid: GridSpec | None = None) -> EigenSystem:
    """First n_max + 1 eigenpairs of the model's radial generator."""
    grid = grid or GridSpec()
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    if n_max > grid.num_cells // 8:
        raise DomainError(
            f"n_max = {n_max} too large for {grid.num_cells} cells; need n_max <= num_cells/8"
        )
    disc = assemble(model, grid)
    m = disc.rho_mass[disc.unknown]
    scale = np.sqrt(m)
    diag = disc.k_diag / m
    off = disc.k_off / (scale[:-1] * scale[1:])
    try:
        lam, vec = eigh_tridiagonal(diag, off, select="i", select_range=(0, n_max))
    except Exception as exc:  # pragma: no cover - LAPACK failure surface
        raise NumericalError(f"tridiagonal eigensolver failed: {exc}") from exc
    if not lam[0] > 0:
        raise NumericalError(f"principal eigenvalue not positive: {lam[0]}")
    funcs = (vec / scale[:, None]).T
    # fix the sign at the reflecting end of the domain (the node farthest
    # from the target, which is also the delta-start node), where every
    # radial mode is nonzero
    anchor = disc.delta_node
    full = np.zeros((funcs.shape[0], disc.r.shape[0]))
    full[:, disc.unknown] = funcs
    signs = np.where(full[:, anchor] >= 0, 1.0, -1.0)
    full *= signs[:, None]
    return EigenSystem(
        eigenvalues=lam / disc.time_scale,
        eigenfunctions=full,
        r=disc.r,
        rho_mass=disc.rho_mass,
        unif_mass=disc.unif_mass,
        delta_node=disc.delta_node,
    )


def expansion_coefficients(system: EigenSystem, initial: InitialCondition) -> SpectralCoefficients:
    """A_n = (u_n, 1)_rho * integral of u_n against the start distribution."""
    overlap_one = system.eigenfunctions @ system.rho_mass
    if initial is InitialCondition.DELTA_AT_OUTER:
        start = system.eigenfunctions[:, system.delta_node]
    elif initial is InitialCondition.UNIFORM:
        start = (system.eigenfunctions @ system.unif_mass) / system.unif_mass.sum()
    else:
        density = quasi_stationary_density(system)
        start = system.eigenfunctions @ (density * system.rho_mass)
    return SpectralCoefficients(values=overlap_one * start)


def survival_from_expansion(system: EigenSystem, coeffs: SpectralCoefficients, times) -> SurvivalCurve:
    """Truncated series S(t) = sum_n A_n exp(-lambda_n t) on the given times (> 0)."""
    t = np.asarray(times, dtype=float)
    if np.any(t <= 0):
        raise DomainError("spectral survival needs strictly positive times (truncated sum misses S(0)=1)")
    values = coeffs.values @ np.exp(-np.outer(system.eigenvalues, t))
    return SurvivalCurve(times=t, values=values, truncation_bound=coeffs.tail_bound)


def quasi_stationary_density(system: EigenSystem) -> np.ndarray:
    """Node values of the quasi-stationary start density u0 rho / N.

    Returned relative to the weighted radial measure: the density g
    satisfies sum_i g(r_i) w_i = 1 with w the rho r^(d-1) dual-cell masses,
    and g >= 0 by ground-state positivity.
    """
    u0 = system.eigenfunctions[0]
    norm = float(u0 @ system.rho_mass)
    density = u0 / norm
    if np.any(density < -1e-10):
        raise NumericalError("ground state changed sign; eigensolve is unusable")
    return np.maximum(density, 0.0)


def eta_error(coeffs: SpectralCoefficients, system: EigenSystem, x) -> float | np.ndarray:
    """Deviation-from-exponential error eta(x) = A_0 - 1 + sum_{n>=1} A_n e^{(1 - lambda_n/lambda_0) x}."""
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0):
        raise DomainError("eta_error requires x >= 0")
    lam = system.eigenvalues
    a = coeffs.values
    base = a[0] - 1.0
    if len(a) == 1:
        out = np.full(xs.shape, base) if xs.ndim else base
        return out
    exponents = (1.0 - lam[1:] / lam[0])[:, None] * np.atleast_1d(xs)[None, :]
    tail = a[1:] @ np.exp(exponents)
    out = base + tail
    return float(out[0]) if np.ndim(x) == 0 else out
