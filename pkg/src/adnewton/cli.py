"""Experiment runner: the two benchmark experiments, with CSV emission.

Experiment 1: L-shaped domain, rational coefficient, zero initial guess.
Experiment 2: unit square, regularized Bingham coefficient, initial guess
interpolating sin(pi x) sin(pi y).

One --scheme flag runs that scheme and writes one CSV; repeating --scheme runs
a comparison of all requested schemes from the same initial guess against the
same Kacanov reference and writes a single combined CSV. All floating-point
output uses 17 significant digits so files round-trip losslessly and repeated
runs are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import fem, solver
from .mesh import l_shape_mesh, unit_square_mesh
from .models import ManufacturedProblem, exact_solution, model_experiment1, model_experiment2

CSV_COLUMNS = ["scheme", "iteration", "delta_used", "trials", "potential_value",
               "update_energy_norm", "residual_norm", "error_vs_reference", "terminated"]

SCHEMES = ("adaptive", "fixed", "classical", "kacanov")


@dataclass
class RunConfig:
    """Validated CLI configuration with experiment-derived defaults applied."""

    experiment: int
    schemes: list[str] = field(default_factory=lambda: ["adaptive"])
    mesh_n: int = 32
    sigma: float = 0.8
    theta: float = 0.1
    fixed_delta: float | None = None
    max_outer_iter: int = 100
    stop_update_norm: float = 1e-10
    stop_residual_rel: float = 1e-10
    ref_tol: float = 1e-12
    ref_max_iter: int = 10_000
    output: str | None = None

    def solver_config(self) -> solver.SolverConfig:
        return solver.SolverConfig(
            sigma=self.sigma, theta=self.theta, max_outer_iter=self.max_outer_iter,
            stop_update_norm=self.stop_update_norm, stop_residual_rel=self.stop_residual_rel)


def build_experiment(experiment: int, mesh_n: int):
    """(problem, u0) for the requested experiment at the given resolution.

    Both experiments use the source manufactured from the rational coefficient
    so that sin(pi x) sin(pi y) solves experiment 1 exactly; experiment 2 keeps
    that source but swaps in the Bingham coefficient, which is what makes its
    interpolated initial guess a genuinely bad one.
    """
    value, grad = exact_solution()
    source_model, _ = model_experiment1()
    manufactured = ManufacturedProblem(model=source_model, exact_value=value,
                                       exact_grad=grad)
    if experiment == 1:
        mesh = l_shape_mesh(mesh_n)
        model, constants = model_experiment1()
        u0 = np.zeros(mesh.n_interior)
    elif experiment == 2:
        mesh = unit_square_mesh(mesh_n)
        model, constants = model_experiment2()
        u0 = fem.interpolate(mesh, value)
    else:
        raise ValueError(f"unknown experiment {experiment}")
    load = fem.load_vector(mesh, source_model, manufactured)
    problem = fem.DiscreteProblem(mesh, model, constants, load)
    return problem, u0


def _run_scheme(scheme, problem, u0, cfg, config, reference):
    if scheme == "adaptive":
        return solver.solve_adaptive(problem, u0, cfg, reference)
    if scheme == "fixed":
        delta = config.fixed_delta
        if delta is None:
            delta = problem.constants.damping_floor
        return solver.solve_fixed(problem, u0, delta, cfg, reference)
    if scheme == "classical":
        return solver.solve_fixed(problem, u0, 1.0, cfg, reference)
    if scheme == "kacanov":
        history, _ = solver.kacanov_history(problem, u0, cfg.stop_update_norm,
                                            cfg.max_outer_iter, reference)
        return history
    raise ValueError(f"unknown scheme {scheme!r}")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_histories_csv(path, histories: dict[str, solver.ConvergenceHistory]) -> None:
    """One row per iteration (plus an iteration-0 row for the initial state)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for scheme, history in histories.items():
            writer.writerow([scheme, 0, "", "", _fmt(history.initial_potential), "",
                             _fmt(history.initial_residual_norm),
                             _fmt(history.initial_error), history.terminated])
            for rec in history.records:
                writer.writerow([scheme, rec.iteration, _fmt(rec.delta_used),
                                 rec.trial_count, _fmt(rec.potential_value),
                                 _fmt(rec.update_energy_norm), _fmt(rec.residual_norm),
                                 _fmt(rec.error_vs_reference), history.terminated])


def _default_output(config: RunConfig, scheme: str | None) -> str:
    tag = scheme if scheme else "compare"
    return f"experiment{config.experiment}_{tag}.csv"


def _scheme_path(base: str, scheme: str, multiple: bool) -> Path:
    path = Path(base)
    if not multiple:
        return path
    return path.with_name(f"{path.stem}_{scheme}{path.suffix or '.csv'}")


def _print_header(config: RunConfig, problem, out=None) -> None:
    out = out or sys.stdout
    c = problem.constants
    m = problem.model
    print(f"experiment {config.experiment}: "
          f"{'L-shape' if config.experiment == 1 else 'unit square'}, "
          f"mesh_n={config.mesh_n}, interior DOFs={problem.mesh.n_interior}", file=out)
    print(f"  sigma={config.sigma:g} theta={config.theta:g} "
          f"m_mu={m.m_mu:g} M_mu={m.M_mu:g} L={c.L:g} alpha_Fp={c.alpha_Fp:g} "
          f"beta_Fp={c.beta_Fp:g} damping_floor={c.damping_floor:g}", file=out)


def _print_history(scheme: str, history: solver.ConvergenceHistory, out=None) -> None:
    out = out or sys.stdout
    err = history.final_error
    err_text = f"{err:.3e}" if err is not None else "n/a"
    res = (history.records[-1].residual_norm if history.records
           else history.initial_residual_norm)
    print(f"  {scheme}: {history.iterations} iterations, terminated={history.terminated}, "
          f"final error={err_text}, final residual={res:.3e}", file=out)


def run(config: RunConfig, out=None) -> dict[str, solver.ConvergenceHistory]:
    """Run each requested scheme and write one CSV per scheme."""
    out = out or sys.stdout
    problem, u0 = build_experiment(config.experiment, config.mesh_n)
    cfg = config.solver_config()
    reference = solver.solve_kacanov(problem, np.zeros_like(u0), config.ref_tol,
                                     config.ref_max_iter)
    _print_header(config, problem, out)
    histories = {}
    multiple = len(config.schemes) > 1
    for scheme in config.schemes:
        history = _run_scheme(scheme, problem, u0, cfg, config, reference)
        histories[scheme] = history
        base = config.output or _default_output(config, scheme)
        path = _scheme_path(base, scheme, multiple)
        write_histories_csv(path, {scheme: history})
        _print_history(scheme, history, out)
        print(f"  wrote {path}", file=out)
    return histories


def compare(config: RunConfig, out=None) -> dict[str, solver.ConvergenceHistory]:
    """Run >= 2 schemes from the same initial guess; write one combined CSV."""
    out = out or sys.stdout
    if len(config.schemes) < 2:
        raise ValueError("compare needs at least two schemes")
    problem, u0 = build_experiment(config.experiment, config.mesh_n)
    cfg = config.solver_config()
    reference = solver.solve_kacanov(problem, np.zeros_like(u0), config.ref_tol,
                                     config.ref_max_iter)
    _print_header(config, problem, out)
    histories = {}
    for scheme in config.schemes:
        histories[scheme] = _run_scheme(scheme, problem, u0, cfg, config, reference)
        _print_history(scheme, histories[scheme], out)
    path = config.output or _default_output(config, None)
    write_histories_csv(path, histories)
    print(f"  wrote {path}", file=out)
    return histories


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adnewton",
        description="Adaptively damped Newton experiments for quasilinear diffusion.")
    parser.add_argument("--experiment", type=int, choices=(1, 2), required=True)
    parser.add_argument("--scheme", action="append", choices=SCHEMES, dest="schemes",
                        help="repeat to compare several schemes in one combined CSV")
    parser.add_argument("--fixed-delta", type=float, default=None,
                        help="step size for --scheme fixed (default: the damping floor)")
    parser.add_argument("--mesh-n", type=int, default=32)
    parser.add_argument("--sigma", type=float, default=0.8)
    parser.add_argument("--theta", type=float, default=0.1)
    parser.add_argument("--max-iter", type=int, default=100, dest="max_outer_iter")
    parser.add_argument("--stop-update", type=float, default=1e-10, dest="stop_update_norm")
    parser.add_argument("--stop-residual", type=float, default=1e-10,
                        dest="stop_residual_rel")
    parser.add_argument("--ref-tol", type=float, default=1e-12)
    parser.add_argument("--output", default=None)
    return parser


def parse_config(argv) -> RunConfig:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = RunConfig(
        experiment=args.experiment,
        schemes=args.schemes or ["adaptive"],
        mesh_n=args.mesh_n,
        sigma=args.sigma,
        theta=args.theta,
        fixed_delta=args.fixed_delta,
        max_outer_iter=args.max_outer_iter,
        stop_update_norm=args.stop_update_norm,
        stop_residual_rel=args.stop_residual_rel,
        ref_tol=args.ref_tol,
        output=args.output,
    )
    if config.mesh_n < 1:
        parser.error("--mesh-n must be at least 1")
    if config.fixed_delta is not None and config.fixed_delta <= 0.0:
        parser.error("--fixed-delta must be positive")
    try:
        config.solver_config()
    except ValueError as exc:
        parser.error(str(exc))
    return config


def main(argv=None) -> int:
    """Entry point; returns 0 even when a scheme fails to converge (that is data)."""
    config = parse_config(argv)
    if len(config.schemes) >= 2:
        compare(config)
    else:
        run(config)
    return 0


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
