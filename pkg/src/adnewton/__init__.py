"""Adaptively damped Newton solvers for strongly monotone quasilinear diffusion.

The library discretizes -div(mu(|grad u|^2) grad u) = g with P1 finite
elements on structured meshes and solves the resulting operator equation with
an adaptive step-size Newton method that is globally convergent and undamped
near the solution, alongside fixed-step Newton and Kacanov iterations for
comparison and reference solves.
"""

from .fem import (DiscreteProblem, MIDPOINT_RULE, QuadratureRule, SEVEN_POINT_RULE,
                  energy_norm, interpolate, jacobian, load_vector, picard_matrix,
                  potential, residual, stiffness_matrix)
from .linalg import LinearSolveError, NotSPDError, cg_solve, from_triplets, matvec, to_triplets
from .mesh import Mesh, dump_mesh, element_geometry, l_shape_mesh, unit_square_mesh
from .models import (DiffusionModel, ManufacturedProblem, StructuralConstants,
                     constant_model, exact_solution, model_experiment1, model_experiment2)
from .solver import (ConvergenceHistory, NonConvergenceError, SolverConfig, StepRecord,
                     TrialBudgetError, adaptive_step, kacanov_history, newton_direction,
                     predicted_decay, solve_adaptive, solve_fixed, solve_kacanov)

__all__ = [
    "ConvergenceHistory", "DiffusionModel", "DiscreteProblem", "LinearSolveError",
    "ManufacturedProblem", "Mesh", "MIDPOINT_RULE", "NonConvergenceError", "NotSPDError",
    "QuadratureRule", "SEVEN_POINT_RULE", "SolverConfig", "StepRecord",
    "StructuralConstants", "TrialBudgetError", "adaptive_step", "cg_solve",
    "constant_model", "dump_mesh", "element_geometry", "energy_norm", "exact_solution",
    "from_triplets", "interpolate", "jacobian", "kacanov_history", "l_shape_mesh",
    "load_vector", "matvec", "model_experiment1", "model_experiment2", "newton_direction",
    "picard_matrix", "potential", "predicted_decay", "residual", "solve_adaptive",
    "solve_fixed", "solve_kacanov", "stiffness_matrix", "to_triplets", "unit_square_mesh",
]

__version__ = "0.1.0"
