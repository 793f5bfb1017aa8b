"""Experiment 1: L-shaped domain, rational diffusion coefficient.

The adaptive damped Newton method accepts the undamped step at every
iteration and converges quadratically; the fixed step at the damping floor
alpha/L = 1/12 (the a-priori admissible choice) is globally convergent but
painfully slow.
"""

import numpy as np

from adnewton import SolverConfig, solve_adaptive, solve_fixed, solve_kacanov
from adnewton.cli import build_experiment

problem, u0 = build_experiment(1, 32)
constants = problem.constants
print(f"L-shape, n=32: {problem.mesh.n_interior} interior DOFs; "
      f"m_mu={problem.model.m_mu}, M_mu={problem.model.M_mu}, "
      f"L={constants.L}, damping floor={constants.damping_floor:.4f}")

print("\ncomputing the Kacanov reference solution (tol 1e-12) ...")
reference = solve_kacanov(problem, np.zeros_like(u0), 1e-12, 10_000)

cfg = SolverConfig(sigma=0.8, theta=0.1)
adaptive = solve_adaptive(problem, u0, cfg, reference=reference)
fixed = solve_fixed(problem, u0, constants.damping_floor, cfg, reference=reference)

print(f"\nadaptive scheme ({adaptive.terminated}):")
print(f"{'iter':>5} {'delta':>7} {'trials':>7} {'update norm':>13} {'error':>11}")
for r in adaptive.records:
    print(f"{r.iteration:>5} {r.delta_used:>7.3f} {r.trial_count:>7} "
          f"{r.update_energy_norm:>13.3e} {r.error_vs_reference:>11.3e}")

print("\nerror ratios e_next / e^2 (bounded => quadratic convergence):")
errs = [adaptive.initial_error] + [r.error_vs_reference for r in adaptive.records]
for a, b in zip(errs, errs[1:]):
    if b > 1e-11:
        print(f"  {b:.3e} / {a:.3e}^2 = {b / a ** 2:.3f}")

n = adaptive.iterations
err_fixed = fixed.records[n - 1].error_vs_reference
print(f"\nfixed step delta = 1/12 ({fixed.terminated} after {fixed.iterations} iterations):")
print(f"  error after {n} iterations:   {err_fixed:.3e}")
print(f"  adaptive error at that point: {errs[-1]:.3e}")
print(f"  ratio: {err_fixed / errs[-1]:.2e}")
print(f"  error after {fixed.iterations} iterations: "
      f"{fixed.records[-1].error_vs_reference:.3e}")
