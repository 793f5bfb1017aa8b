"""Iteration schemes: adaptive damped Newton, fixed-step Newton, and Kacanov.

The adaptive scheme tries the undamped update first and backtracks by a
factor sigma, never below the floor alpha_Fp / L, until the potential drops by
at least theta * min(alpha_Fp, L) times the squared step length. Acceptance at
the floor is guaranteed in exact arithmetic, so the trial loop terminates; a
trial budget guards the implementation anyway.

All schemes record per-iteration data in a ConvergenceHistory so runs can be
dumped to CSV and the decay inequalities re-checked after the fact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg

CONVERGED = "converged"
ITERATION_BUDGET = "iteration_budget"
TRIAL_BUDGET = "trial_budget"
LINEAR_SOLVE_FAILURE = "linear_solve_failure"
DIVERGENCE = "divergence"

# Near a root the potential difference of one step underflows to round-off;
# differences below this scale (relative to 1 + |H|) are treated as zero.
POTENTIAL_ROUNDOFF = 1e-14


class TrialBudgetError(RuntimeError):
    """Backtracking exhausted max_trials_per_step without an accepted iterate."""


class NonConvergenceError(RuntimeError):
    """An iteration scheme ran out of its outer budget."""


@dataclass(frozen=True)
class SolverConfig:
    """Damping, tolerance and budget parameters shared by all schemes."""

    sigma: float = 0.8
    theta: float = 0.1
    max_outer_iter: int = 100
    max_trials_per_step: int = 40
    linear_rel_tol: float = 1e-12
    stop_update_norm: float = 1e-10
    stop_residual_rel: float = 1e-10

    def __post_init__(self):
        if not 0.0 < self.sigma < 1.0:
            raise ValueError("sigma must lie in (0, 1)")
        if not 0.0 < self.theta <= 0.5:
            raise ValueError("theta must lie in (0, 0.5]")
        if self.max_outer_iter < 1 or self.max_trials_per_step < 1:
            raise ValueError("iteration budgets must be positive")
        if self.linear_rel_tol <= 0.0:
            raise ValueError("linear_rel_tol must be positive")

    def required_trials(self, damping_floor: float) -> int:
        """Trials needed for the delta sequence to reach the floor from 1."""
        return int(np.ceil(np.log(damping_floor) / np.log(self.sigma))) + 2


@dataclass(frozen=True)
class StepRecord:
    """One accepted outer iteration."""

    iteration: int
    delta_used: float
    trial_count: int
    potential_value: float
    update_energy_norm: float
    error_vs_reference: float | None
    residual_norm: float


@dataclass
class ConvergenceHistory:
    """Per-iteration records plus the state at the initial guess."""

    initial_potential: float
    initial_residual_norm: float
    initial_error: float | None
    records: list[StepRecord] = field(default_factory=list)
    terminated: str = ITERATION_BUDGET

    @property
    def final_error(self) -> float | None:
        return self.records[-1].error_vs_reference if self.records else self.initial_error

    @property
    def iterations(self) -> int:
        return len(self.records)


def newton_direction(p, u: np.ndarray, cfg: SolverConfig) -> np.ndarray:
    """Solve F'(u) rho = F(u); the undamped update is u - rho."""
    return linalg.cg_solve(p.jacobian(u), p.residual(u), cfg.linear_rel_tol)


def _accepts(h_before: float, h_after: float, threshold: float) -> bool:
    decrease = h_before - h_after
    if decrease >= threshold:
        return True
    eps = POTENTIAL_ROUNDOFF * (1.0 + abs(h_before))
    return abs(decrease) <= eps and threshold <= eps


def adaptive_step(p, u: np.ndarray, rho: np.ndarray, cfg: SolverConfig,
                  potential_u: float | None = None) -> tuple[np.ndarray, float, int]:
    """One backtracked update u - delta * rho; returns (iterate, delta, trials).

    The trial deltas are 1, max(sigma, floor), max(sigma^2, floor), ...;
    delta is the value that produced the accepted iterate.
    """
    constants = p.constants
    floor = constants.damping_floor
    needed = cfg.required_trials(floor)
    if cfg.max_trials_per_step < needed:
        raise ValueError(f"max_trials_per_step={cfg.max_trials_per_step} cannot reach "
                         f"the damping floor {floor:g}; need at least {needed}")
    c_decay = cfg.theta * min(constants.alpha_Fp, constants.L)
    h_u = p.potential(u) if potential_u is None else potential_u
    rho_norm = p.energy_norm(rho)

    delta = 1.0
    for trial in range(1, cfg.max_trials_per_step + 1):
        u_trial = u - delta * rho
        threshold = c_decay * (delta * rho_norm) ** 2
        if _accepts(h_u, p.potential(u_trial), threshold):
            return u_trial, delta, trial
        delta = max(cfg.sigma * delta, floor)
    raise TrialBudgetError(
        f"no accepted step within {cfg.max_trials_per_step} trials (floor {floor:g})")


def solve_adaptive(p, u0: np.ndarray, cfg: SolverConfig,
                   reference: np.ndarray | None = None) -> ConvergenceHistory:
    """Adaptive damped Newton iteration from u0."""
    u = np.asarray(u0, dtype=np.float64).copy()
    h_u = p.potential(u)
    r = p.residual(u)
    history = _new_history(p, u, h_u, r, reference)
    residual_stop = cfg.stop_residual_rel * np.linalg.norm(p.load)

    for n in range(1, cfg.max_outer_iter + 1):
        if np.linalg.norm(r) <= residual_stop:
            history.terminated = CONVERGED
            return history
        try:
            rho = linalg.cg_solve(p.jacobian(u), r, cfg.linear_rel_tol)
            u, delta, trials = adaptive_step(p, u, rho, cfg, potential_u=h_u)
        except linalg.LinearSolveError:
            history.terminated = LINEAR_SOLVE_FAILURE
            return history
        except TrialBudgetError:
            history.terminated = TRIAL_BUDGET
            return history
        update_norm = delta * p.energy_norm(rho)
        h_u = p.potential(u)
        r = p.residual(u)
        history.records.append(StepRecord(
            iteration=n, delta_used=delta, trial_count=trials, potential_value=h_u,
            update_energy_norm=update_norm, error_vs_reference=_error(p, u, reference),
            residual_norm=float(np.linalg.norm(r))))
        if update_norm <= cfg.stop_update_norm:
            history.terminated = CONVERGED
            return history
    history.terminated = ITERATION_BUDGET
    return history


def solve_fixed(p, u0: np.ndarray, delta: float, cfg: SolverConfig,
                reference: np.ndarray | None = None) -> ConvergenceHistory:
    """Damped Newton with a fixed step size; delta = 1 is the classical scheme.

    A divergence guard stops the run once the update norm blows up past 1e6
    times the first update or turns non-finite, so the non-convergent classical
    scheme terminates cleanly.
    """
    if delta <= 0.0:
        raise ValueError("delta must be positive")
    u = np.asarray(u0, dtype=np.float64).copy()
    r = p.residual(u)
    history = _new_history(p, u, p.potential(u), r, reference)
    residual_stop = cfg.stop_residual_rel * np.linalg.norm(p.load)
    first_update = None

    for n in range(1, cfg.max_outer_iter + 1):
        if np.linalg.norm(r) <= residual_stop:
            history.terminated = CONVERGED
            return history
        try:
            rho = linalg.cg_solve(p.jacobian(u), r, cfg.linear_rel_tol)
        except linalg.LinearSolveError:
            history.terminated = LINEAR_SOLVE_FAILURE
            return history
        u = u - delta * rho
        update_norm = delta * p.energy_norm(rho)
        if first_update is None:
            first_update = update_norm
        with np.errstate(over="ignore", invalid="ignore"):
            h_u = p.potential(u)
            r = p.residual(u)
        history.records.append(StepRecord(
            iteration=n, delta_used=delta, trial_count=1, potential_value=h_u,
            update_energy_norm=update_norm, error_vs_reference=_error(p, u, reference),
            residual_norm=float(np.linalg.norm(r))))
        if not np.isfinite(update_norm) or update_norm > 1e6 * first_update:
            history.terminated = DIVERGENCE
            return history
        if update_norm <= cfg.stop_update_norm:
            history.terminated = CONVERGED
            return history
    history.terminated = ITERATION_BUDGET
    return history


def kacanov_history(p, u0: np.ndarray, tol: float, max_iter: int,
                    reference: np.ndarray | None = None,
                    linear_rel_tol: float = 1e-12) -> tuple[ConvergenceHistory, np.ndarray]:
    """Frozen-coefficient (Picard) iteration A(u^n) u^{n+1} = load, with records."""
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    from . import fem  # local import; fem imports nothing from here

    u = np.asarray(u0, dtype=np.float64).copy()
    r = p.residual(u)
    history = _new_history(p, u, p.potential(u), r, reference)
    for n in range(1, max_iter + 1):
        u_next = linalg.cg_solve(fem.picard_matrix(p, u), p.load, linear_rel_tol)
        update_norm = p.energy_norm(u_next - u)
        u = u_next
        r = p.residual(u)
        history.records.append(StepRecord(
            iteration=n, delta_used=1.0, trial_count=1, potential_value=p.potential(u),
            update_energy_norm=update_norm, error_vs_reference=_error(p, u, reference),
            residual_norm=float(np.linalg.norm(r))))
        if update_norm <= tol:
            history.terminated = CONVERGED
            return history, u
    history.terminated = ITERATION_BUDGET
    return history, u


def solve_kacanov(p, u0: np.ndarray, tol: float = 1e-12,
                  max_iter: int = 10_000) -> np.ndarray:
    """Kacanov reference solve; raises NonConvergenceError on budget exhaustion."""
    history, u = kacanov_history(p, u0, tol, max_iter)
    if history.terminated != CONVERGED:
        raise NonConvergenceError(
            f"Kacanov iteration did not reach tol={tol:g} in {max_iter} iterations")
    return u


def predicted_decay(p, u: np.ndarray, rho: np.ndarray, delta):
    """Quadratic model of H(u - delta rho) - H(u): 1/2 d^2 <F'(u)rho,rho> - d <F(u),rho>.

    delta may be a scalar or an array of step sizes; negative values mean
    predicted descent. The model is exact to second order and its minimizer is
    delta = 1 whenever rho is the Newton direction.
    """
    curvature = float(rho @ linalg.matvec(p.jacobian(u), rho))
    slope = float(p.residual(u) @ rho)
    delta = np.asarray(delta, dtype=np.float64)
    out = 0.5 * delta ** 2 * curvature - delta * slope
    return float(out) if out.ndim == 0 else out


def _error(p, u: np.ndarray, reference: np.ndarray | None) -> float | None:
    if reference is None:
        return None
    return p.energy_norm(u - reference)


def _new_history(p, u, h_u, r, reference) -> ConvergenceHistory:
    return ConvergenceHistory(
        initial_potential=h_u,
        initial_residual_norm=float(np.linalg.norm(r)),
        initial_error=_error(p, u, reference))
