"""The quadratic step-size model and the optimality of the undamped update.

Along the experiment-1 Newton sequence, the second-order model of the
potential difference,

    H(u - d*rho) - H(u)  ~  d^2/2 <F'(u) rho, rho> - d <F(u), rho>,

is minimized over a step-size grid; the minimizer is always d = 1, and the
model error (normalized by ||rho||_X^2) shrinks together with the update, so
the full Newton step becomes optimal near the solution.
"""

import numpy as np

from adnewton import SolverConfig, adaptive_step, cg_solve, predicted_decay
from adnewton.cli import build_experiment

problem, u = build_experiment(1, 32)
cfg = SolverConfig(sigma=0.8, theta=0.1)
grid = np.round(np.arange(1, 201) * 0.01, 2)  # 0.01 ... 2.00

print(f"{'iter':>5} {'argmin_d model':>15} {'||rho||_X':>11} "
      f"{'actual H-drop':>14} {'model H-drop':>14} {'|gap|/||rho||^2':>16}")
h_u = problem.potential(u)
for n in range(1, 20):
    residual = problem.residual(u)
    if np.linalg.norm(residual) <= 1e-10 * np.linalg.norm(problem.load):
        break
    rho = cg_solve(problem.jacobian(u), residual, 1e-12)
    model_curve = predicted_decay(problem, u, rho, grid)
    argmin = grid[np.argmin(model_curve)]
    u_next, delta, _ = adaptive_step(problem, u, rho, cfg, potential_u=h_u)
    h_next = problem.potential(u_next)
    rho_norm = problem.energy_norm(rho)
    actual = h_next - h_u
    model = predicted_decay(problem, u, rho, delta)
    print(f"{n:>5} {argmin:>15.2f} {rho_norm:>11.3e} {actual:>14.6e} "
          f"{model:>14.6e} {abs(actual - model) / rho_norm ** 2:>16.3e}")
    u, h_u = u_next, h_next

print("\nmodel of the potential drop as a function of the step size at the "
      "second iterate (coarse grid):")
problem, u = build_experiment(1, 16)
residual = problem.residual(u)
rho = cg_solve(problem.jacobian(u), residual, 1e-12)
for d in (0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0):
    print(f"  d = {d:4.2f}: predicted drop {predicted_decay(problem, u, rho, d):+.6f}")
