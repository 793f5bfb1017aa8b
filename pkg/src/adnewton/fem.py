"""P1 Galerkin realization of the quasilinear diffusion operator.

For piecewise-linear fields the gradient is constant per element, so the
stiffness, residual, Jacobian and potential integrals are all evaluated
exactly by a one-point rule; only the load vector (which samples the smooth
manufactured gradient) needs a real quadrature rule.

Element geometry, the DOF scatter pattern and the unweighted stiffness matrix
are computed once per mesh and cached, since every backtracking trial of the
Newton solver touches them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from . import linalg
from .mesh import Mesh
from .models import DiffusionModel, ManufacturedProblem, StructuralConstants


@dataclass(frozen=True)
class QuadratureRule:
    """Barycentric points and weights on the reference triangle; weights sum to 1."""

    points: np.ndarray   # (k, 3) barycentric coordinates
    weights: np.ndarray  # (k,), scaled by element area at use
    degree: int

    def __post_init__(self):
        if np.any(self.weights <= 0.0):
            raise ValueError("quadrature weights must be positive")
        if abs(self.weights.sum() - 1.0) > 1e-14:
            raise ValueError("quadrature weights must sum to 1")


#: Edge-midpoint rule, exact for quadratics.
MIDPOINT_RULE = QuadratureRule(
    points=np.array([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5]]),
    weights=np.array([1.0, 1.0, 1.0]) / 3.0,
    degree=2,
)

_a = 0.059715871789770
_b = 0.797426985353087
#: Seven-point rule, exact for quintics; for load-vector sanity checks.
SEVEN_POINT_RULE = QuadratureRule(
    points=np.array([
        [1 / 3, 1 / 3, 1 / 3],
        [_a, (1 - _a) / 2, (1 - _a) / 2],
        [(1 - _a) / 2, _a, (1 - _a) / 2],
        [(1 - _a) / 2, (1 - _a) / 2, _a],
        [_b, (1 - _b) / 2, (1 - _b) / 2],
        [(1 - _b) / 2, _b, (1 - _b) / 2],
        [(1 - _b) / 2, (1 - _b) / 2, _b],
    ]),
    weights=np.array([0.225,
                      0.132394152788506, 0.132394152788506, 0.132394152788506,
                      0.125939180544827, 0.125939180544827, 0.125939180544827]),
    degree=5,
)


@dataclass(frozen=True, eq=False)
class _ElementData:
    """Per-mesh assembly arrays shared by every operator evaluation."""

    areas: np.ndarray        # (m,)
    grads: np.ndarray        # (m, 3, 2) hat-function gradients
    gram: np.ndarray         # (m, 3, 3) grads[i] . grads[j]
    dof: np.ndarray          # (m, 3) interior DOF or -1
    row_valid: np.ndarray    # (m, 3) bool, dof >= 0
    coo_rows: np.ndarray     # jacobian scatter rows (interior pairs only)
    coo_cols: np.ndarray
    coo_mask: np.ndarray     # (9m,) bool selecting interior pairs


@lru_cache(maxsize=None)
def _element_data(mesh: Mesh) -> _ElementData:
    tri = mesh.triangles
    p0 = mesh.vertices[tri[:, 0]]
    p1 = mesh.vertices[tri[:, 1]]
    p2 = mesh.vertices[tri[:, 2]]
    twice_area = ((p1[:, 0] - p0[:, 0]) * (p2[:, 1] - p0[:, 1])
                  - (p2[:, 0] - p0[:, 0]) * (p1[:, 1] - p0[:, 1]))
    if np.any(twice_area <= 0.0):
        bad = int(np.argmax(twice_area <= 0.0))
        raise ValueError(f"triangle {bad} is degenerate or negatively oriented")

    grads = np.empty((tri.shape[0], 3, 2))
    grads[:, 0, 0] = p1[:, 1] - p2[:, 1]
    grads[:, 0, 1] = p2[:, 0] - p1[:, 0]
    grads[:, 1, 0] = p2[:, 1] - p0[:, 1]
    grads[:, 1, 1] = p0[:, 0] - p2[:, 0]
    grads[:, 2, 0] = p0[:, 1] - p1[:, 1]
    grads[:, 2, 1] = p1[:, 0] - p0[:, 0]
    grads /= twice_area[:, None, None]

    dof = mesh.interior_index[tri]
    row_valid = dof >= 0
    rows = np.repeat(dof[:, :, None], 3, axis=2).ravel()
    cols = np.repeat(dof[:, None, :], 3, axis=1).ravel()
    mask = (rows >= 0) & (cols >= 0)

    return _ElementData(
        areas=0.5 * twice_area,
        grads=grads,
        gram=np.einsum("mid,mjd->mij", grads, grads),
        dof=dof,
        row_valid=row_valid,
        coo_rows=rows[mask],
        coo_cols=cols[mask],
        coo_mask=mask,
    )


@lru_cache(maxsize=None)
def stiffness_matrix(mesh: Mesh) -> sp.csr_matrix:
    """Unweighted interior stiffness matrix int grad(phi_j) . grad(phi_i)."""
    ed = _element_data(mesh)
    blocks = ed.areas[:, None, None] * ed.gram
    return linalg.from_arrays(mesh.n_interior, ed.coo_rows, ed.coo_cols,
                              blocks.ravel()[ed.coo_mask])


def energy_norm(mesh: Mesh, u: np.ndarray) -> float:
    """H^1_0 seminorm sqrt(int |grad u|^2) of the P1 field with coefficients u."""
    u = _check_vector(mesh, u)
    s = stiffness_matrix(mesh)
    return float(np.sqrt(max(u @ (s @ u), 0.0)))


def _check_vector(mesh: Mesh, u) -> np.ndarray:
    u = np.asarray(u, dtype=np.float64)
    if u.shape != (mesh.n_interior,):
        raise ValueError(f"expected coefficient vector of length {mesh.n_interior}, "
                         f"got shape {u.shape}")
    return u


def _element_gradients(ed: _ElementData, u: np.ndarray) -> np.ndarray:
    """Constant gradient of the P1 field on every element, shape (m, 2)."""
    u_ext = np.append(u, 0.0)  # boundary vertices (dof == -1) carry value 0
    return np.einsum("mk,mkd->md", u_ext[ed.dof], ed.grads)


def load_vector(mesh: Mesh, model: DiffusionModel, exact: ManufacturedProblem,
                rule: QuadratureRule = MIDPOINT_RULE) -> np.ndarray:
    """Galerkin load with entries int mu(|grad u*|^2) grad u* . grad(phi_i).

    The source is realized weakly through the manufactured gradient evaluated
    at the quadrature points; no strong-form derivative of mu is ever needed.
    """
    ed = _element_data(mesh)
    tri_coords = mesh.vertices[mesh.triangles]  # (m, 3, 2)
    out = np.zeros(mesh.n_interior)
    for bary, w in zip(rule.points, rule.weights):
        pts = np.einsum("k,mkd->md", bary, tri_coords)
        gx, gy = exact.exact_grad(pts[:, 0], pts[:, 1])
        q = gx * gx + gy * gy
        coef = w * ed.areas * model.mu(q)
        contrib = coef[:, None] * (gx[:, None] * ed.grads[:, :, 0]
                                   + gy[:, None] * ed.grads[:, :, 1])
        np.add.at(out, ed.dof[ed.row_valid], contrib[ed.row_valid])
    return out


class DiscreteProblem:
    """Mesh, coefficient model and load, bundled for the iteration schemes.

    The instance is immutable in use; the methods mirror the module-level
    operations so solvers only need the object.
    """

    def __init__(self, mesh: Mesh, model: DiffusionModel,
                 constants: StructuralConstants, load: np.ndarray):
        self.mesh = mesh
        self.model = model
        self.constants = constants
        self.load = _check_vector(mesh, load)

    @classmethod
    def build(cls, mesh: Mesh, model: DiffusionModel, constants: StructuralConstants,
              exact: ManufacturedProblem,
              rule: QuadratureRule = MIDPOINT_RULE) -> "DiscreteProblem":
        return cls(mesh, model, constants, load_vector(mesh, model, exact, rule))

    def residual(self, u: np.ndarray) -> np.ndarray:
        return residual(self, u)

    def jacobian(self, u: np.ndarray) -> sp.csr_matrix:
        return jacobian(self, u)

    def potential(self, u: np.ndarray) -> float:
        return potential(self, u)

    def energy_norm(self, u: np.ndarray) -> float:
        return energy_norm(self.mesh, u)


def residual(p: DiscreteProblem, u: np.ndarray) -> np.ndarray:
    """Residual vector with entries int mu(|grad u|^2) grad u . grad(phi_i) - load_i."""
    u = _check_vector(p.mesh, u)
    ed = _element_data(p.mesh)
    grad_u = _element_gradients(ed, u)
    q = np.einsum("md,md->m", grad_u, grad_u)
    coef = p.model.mu(q) * ed.areas
    contrib = coef[:, None] * np.einsum("md,mkd->mk", grad_u, ed.grads)
    out = np.zeros(p.mesh.n_interior)
    np.add.at(out, ed.dof[ed.row_valid], contrib[ed.row_valid])
    out -= p.load
    return out


def jacobian(p: DiscreteProblem, u: np.ndarray) -> sp.csr_matrix:
    """Gateaux derivative of the residual at u, a symmetric CSR matrix.

    Entrywise: area * [ mu(q) grad(phi_j).grad(phi_i)
                        + 2 mu'(q) (grad u.grad(phi_j)) (grad u.grad(phi_i)) ].
    """
    u = _check_vector(p.mesh, u)
    ed = _element_data(p.mesh)
    grad_u = _element_gradients(ed, u)
    q = np.einsum("md,md->m", grad_u, grad_u)
    t = np.einsum("md,mkd->mk", grad_u, ed.grads)
    blocks = ((p.model.mu(q) * ed.areas)[:, None, None] * ed.gram
              + (2.0 * p.model.mu_prime(q) * ed.areas)[:, None, None]
              * np.einsum("mi,mj->mij", t, t))
    return linalg.from_arrays(p.mesh.n_interior, ed.coo_rows, ed.coo_cols,
                              blocks.ravel()[ed.coo_mask])


def picard_matrix(p: DiscreteProblem, u: np.ndarray) -> sp.csr_matrix:
    """Frozen-coefficient operator int mu(|grad u|^2) grad(phi_j).grad(phi_i)."""
    u = _check_vector(p.mesh, u)
    ed = _element_data(p.mesh)
    grad_u = _element_gradients(ed, u)
    q = np.einsum("md,md->m", grad_u, grad_u)
    blocks = (p.model.mu(q) * ed.areas)[:, None, None] * ed.gram
    return linalg.from_arrays(p.mesh.n_interior, ed.coo_rows, ed.coo_cols,
                              blocks.ravel()[ed.coo_mask])


def potential(p: DiscreteProblem, u: np.ndarray) -> float:
    """Energy functional int psi(|grad u|^2) - <g, u>; exact for P1 fields."""
    u = _check_vector(p.mesh, u)
    ed = _element_data(p.mesh)
    grad_u = _element_gradients(ed, u)
    q = np.einsum("md,md->m", grad_u, grad_u)
    return float(ed.areas @ p.model.psi(q) - p.load @ u)


def interpolate(mesh: Mesh, f) -> np.ndarray:
    """Coefficients of the P1 nodal interpolant of f at the interior vertices."""
    pts = mesh.vertices[mesh.interior_vertices]
    return np.asarray(f(pts[:, 0], pts[:, 1]), dtype=np.float64)
