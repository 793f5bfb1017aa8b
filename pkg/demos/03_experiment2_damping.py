"""Experiment 2: unit square, regularized Bingham viscosity, bad initial guess.

The source is the one manufactured for experiment 1, so the interpolated
sin(pi x) sin(pi y) initial guess is far from the solution of this problem.
On a 64x64 mesh the classical Newton scheme falls into a permanent two-cycle,
while the adaptive scheme backtracks through a reduced-step phase until the
damping parameter becomes one and quadratic convergence kicks in.

(On the coarser default 32x32 mesh this problem is still benign and even the
classical scheme converges; the instability needs the finer resolution.)
"""

import numpy as np

from adnewton import SolverConfig, solve_adaptive, solve_fixed, solve_kacanov
from adnewton.cli import build_experiment

N = 64
problem, u0 = build_experiment(2, N)
print(f"unit square, n={N}: {problem.mesh.n_interior} interior DOFs; "
      f"mu(0)={float(problem.model.mu(0.0)):.0f}, damping floor="
      f"{problem.constants.damping_floor:.4f}")

print("\ncomputing the Kacanov reference solution (tol 1e-12) ...")
reference = solve_kacanov(problem, np.zeros_like(u0), 1e-12, 10_000)
print(f"initial error of the interpolated guess: "
      f"{problem.energy_norm(u0 - reference):.3e}")

cfg = SolverConfig(sigma=0.8, theta=0.1)

adaptive = solve_adaptive(problem, u0, cfg, reference=reference)
print(f"\nadaptive scheme ({adaptive.terminated} in {adaptive.iterations} iterations):")
print(f"{'iter':>5} {'delta':>7} {'trials':>7} {'error':>11}")
for r in adaptive.records:
    print(f"{r.iteration:>5} {r.delta_used:>7.3f} {r.trial_count:>7} "
          f"{r.error_vs_reference:>11.3e}")

classical = solve_fixed(problem, u0, 1.0, cfg, reference=reference)
errs = [r.error_vs_reference for r in classical.records]
print(f"\nclassical scheme (delta = 1): {classical.terminated} "
      f"after {classical.iterations} iterations")
print("error over the last 10 recorded iterations (note the two-cycle):")
for r in classical.records[-10:]:
    print(f"{r.iteration:>5} {r.error_vs_reference:>11.3e}")
print(f"\nmin/max error over the whole classical run: "
      f"{min(errs):.3e} / {max(errs):.3e}")
