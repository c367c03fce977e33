"""Radial grids and the flux-form discretization shared by the PDE and spectral solvers.

The generator of every supported model reduces on radial functions to
(1/w) d/dr ( w dS/dr ) with weight w(r) = rho(r) r^(d-1), rho the Boltzmann
factor exp(-V/D) (identically 1 for pure diffusion). Discretizing the flux
form on the node dual cells yields a diagonal mass matrix and a symmetric
tridiagonal stiffness matrix, so the very same assembly drives both the
time stepper and the self-adjoint eigenproblem.

Grid units: the annulus problem is assembled on [sigma, 1] with time unit
R^2/D (`time_scale` converts one grid time unit to the model's unit); the
potential-well ball is assembled on [0, 1] directly in units of t_diff.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .model import AnnulusModel, InitialCondition, OUWellModel


@dataclass(frozen=True)
class GridSpec:
    """Spatial grid: cell count and grading toward the target boundary."""

    num_cells: int = 2048
    grading: str = "refined"  # "uniform" or "refined"
    refine_ratio: float = 5.0

    def __post_init__(self) -> None:
        if self.num_cells < 64:
            raise DomainError(f"num_cells must be >= 64, got {self.num_cells}")
        if self.grading not in ("uniform", "refined"):
            raise DomainError(f"grading must be 'uniform' or 'refined', got {self.grading!r}")
        if not self.refine_ratio >= 1.0:
            raise DomainError(f"refine_ratio must be >= 1, got {self.refine_ratio}")


def radial_nodes(lo: float, hi: float, spec: GridSpec, refine_toward: str) -> np.ndarray:
    """Node coordinates on [lo, hi], geometrically clustered toward one end."""
    m = spec.num_cells
    if spec.grading == "uniform" or spec.refine_ratio == 1.0:
        return np.linspace(lo, hi, m + 1)
    q = spec.refine_ratio ** (1.0 / (m - 1))
    h0 = (hi - lo) * (q - 1.0) / (q**m - 1.0)
    widths = h0 * q ** np.arange(m)
    if refine_toward == "hi":
        widths = widths[::-1]
    nodes = np.concatenate(([lo], lo + np.cumsum(widths)))
    nodes[-1] = hi
    return nodes


@dataclass
class RadialDiscretization:
    """Assembled flux-form operator for one model on one grid.

    The stiffness arrays cover only the unknown nodes (the Dirichlet target
    node, when present, is eliminated); masses and node positions cover all
    nodes so initial-condition averages can include the boundary.
    """

    r: np.ndarray  # all node positions
    rho_mass: np.ndarray  # dual-cell masses of rho * r^(d-1), all nodes
    unif_mass: np.ndarray  # dual-cell masses of r^(d-1) alone, all nodes
    k_diag: np.ndarray  # stiffness diagonal, unknown nodes
    k_off: np.ndarray  # stiffness super/subdiagonal, unknown nodes
    unknown: slice  # which nodes are unknowns
    delta_node: int  # node index realizing the delta start
    time_scale: float  # model time units per grid time unit

    @property
    def n_unknowns(self) -> int:
        return self.k_diag.shape[0]

    def embed(self, values: np.ndarray) -> np.ndarray:
        """Place unknown-node values into a full-node vector, zero at the target."""
        full = np.zeros(self.r.shape[0], dtype=float)
        full[self.unknown] = values
        return full

    def average_weights(self, initial: InitialCondition, qs_density: np.ndarray | None = None) -> np.ndarray:
        """Full-node weights w with S(t) = sum_i w_i * S_i(t) for the given start."""
        n = self.r.shape[0]
        if initial is InitialCondition.DELTA_AT_OUTER:
            w = np.zeros(n)
            w[self.delta_node] = 1.0
            return w
        if initial is InitialCondition.UNIFORM:
            return self.unif_mass / self.unif_mass.sum()
        if qs_density is None:
            raise DomainError("quasi-stationary averaging needs the ground-state density")
        w = qs_density * self.rho_mass
        return w / w.sum()


def _dual_cell_masses(r: np.ndarray, dim: int, rho: np.ndarray | None) -> np.ndarray:
    # exact integrals of r^(d-1) over dual cells, scaled by rho at the node
    faces = np.concatenate(([r[0]], 0.5 * (r[:-1] + r[1:]), [r[-1]]))
    mass = (faces[1:] ** dim - faces[:-1] ** dim) / dim
    if rho is not None:
        mass = mass * rho
    return mass


def _face_conductances(r: np.ndarray, dim: int, log_rho_fn) -> np.ndarray:
    mid = 0.5 * (r[:-1] + r[1:])
    h = np.diff(r)
    w_face = mid ** (dim - 1)
    if log_rho_fn is not None:
        w_face = w_face * np.exp(log_rho_fn(mid))
    return w_face / h


def assemble(model: AnnulusModel | OUWellModel, grid: GridSpec | None = None) -> RadialDiscretization:
    """Build the radial operator for an annulus or potential-well model."""
    grid = grid or GridSpec()
    if isinstance(model, OUWellModel):
        return _assemble_ou(model, grid)
    return _assemble_annulus(model, grid)


def _assemble_annulus(model: AnnulusModel, grid: GridSpec) -> RadialDiscretization:
    r = radial_nodes(model.sigma, 1.0, grid, refine_toward="lo")
    cond = _face_conductances(r, model.dim, None)
    mass = _dual_cell_masses(r, model.dim, None)
    n = r.shape[0]
    k_diag = np.zeros(n)
    k_diag[:-1] += cond
    k_diag[1:] += cond
    k_off = -cond.copy()
    if model.perfect:
        unknown = slice(1, None)
        k_diag, k_off = k_diag[1:], k_off[1:]
    else:
        unknown = slice(0, None)
        k_diag[0] += model.sigma ** (model.dim - 1) * model.kappa_bar if model.dim > 1 else model.kappa_bar
    time_scale = model.t_diff / (1.0 - model.sigma) ** 2
    return RadialDiscretization(
        r=r,
        rho_mass=mass,
        unif_mass=mass.copy(),
        k_diag=k_diag,
        k_off=k_off,
        unknown=unknown,
        delta_node=n - 1,
        time_scale=time_scale,
    )


def _assemble_ou(model: OUWellModel, grid: GridSpec) -> RadialDiscretization:
    r = radial_nodes(0.0, 1.0, grid, refine_toward="hi")
    log_rho = lambda x: -(x * x) / model.eps
    cond = _face_conductances(r, model.dim, log_rho)
    rho_nodes = np.exp(log_rho(r))
    rho_mass = _dual_cell_masses(r, model.dim, rho_nodes)
    unif_mass = _dual_cell_masses(r, model.dim, None)
    n = r.shape[0]
    k_diag = np.zeros(n)
    k_diag[:-1] += cond
    k_diag[1:] += cond
    k_off = -cond.copy()
    # whole outer sphere absorbs: Dirichlet at r = 1; natural (zero-flux) at r = 0
    return RadialDiscretization(
        r=r,
        rho_mass=rho_mass,
        unif_mass=unif_mass,
        k_diag=k_diag[:-1],
        k_off=k_off[:-1],
        unknown=slice(0, n - 1),
        delta_node=0,
        time_scale=model.t_diff,
    )
