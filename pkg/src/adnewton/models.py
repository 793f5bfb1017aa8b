"""Diffusion coefficients, their structural constants, and manufactured data.

A diffusion coefficient mu must be positive, continuously differentiable and
decreasing, and satisfy the two-sided band

    m_mu * (t - s)  <=  mu(t^2) t - mu(s^2) s  <=  M_mu * (t - s),   t >= s >= 0.

From (m_mu, M_mu) the operator constants follow: Lipschitz L = 3 M_mu, strong
monotonicity nu = m_mu, derivative coercivity alpha = m_mu and boundedness
beta = 2 M_mu - m_mu. The smallest damping parameter the adaptive Newton
solver ever tries is alpha / L.

All coefficient callables accept scalars or numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class DiffusionModel:
    """Coefficient mu, its derivative, and the antiderivative psi(s) = 1/2 int_0^s mu."""

    mu: Callable
    mu_prime: Callable
    psi: Callable
    m_mu: float
    M_mu: float
    name: str = ""


@dataclass(frozen=True)
class StructuralConstants:
    """Operator constants derived from the coefficient band (m_mu, M_mu)."""

    alpha_Fp: float
    beta_Fp: float
    L: float
    nu: float
    damping_floor: float

    def __post_init__(self):
        if not 0.0 < self.alpha_Fp <= self.beta_Fp:
            raise ValueError("need 0 < alpha_Fp <= beta_Fp")
        if not 0.0 < self.nu <= self.L:
            raise ValueError("need 0 < nu <= L")
        if not 0.0 < self.damping_floor <= 1.0:
            raise ValueError("need 0 < damping_floor <= 1")

    @classmethod
    def from_mu_band(cls, m_mu: float, M_mu: float) -> "StructuralConstants":
        alpha = m_mu
        L = 3.0 * M_mu
        return cls(alpha_Fp=alpha, beta_Fp=2.0 * M_mu - m_mu, L=L, nu=m_mu,
                   damping_floor=alpha / L)


@dataclass(frozen=True)
class ManufacturedProblem:
    """Exact solution data from which the source term is realized weakly."""

    model: DiffusionModel
    exact_value: Callable
    exact_grad: Callable


def model_experiment1() -> tuple[DiffusionModel, StructuralConstants]:
    """mu(t) = 1/(t+1) + 1/2, the L-shape experiment coefficient.

    Band constants m_mu = 3/8 and M_mu = 3/2; psi has the closed form
    psi(s) = ln(s+1)/2 + s/4.
    """
    model = DiffusionModel(
        mu=lambda t: 1.0 / (t + 1.0) + 0.5,
        mu_prime=lambda t: -1.0 / (t + 1.0) ** 2,
        psi=lambda s: 0.5 * np.log(s + 1.0) + 0.25 * s,
        m_mu=3.0 / 8.0,
        M_mu=3.0 / 2.0,
        name="rational",
    )
    return model, StructuralConstants.from_mu_band(model.m_mu, model.M_mu)


def model_experiment2(gamma: float = 0.3, zeta: float = 1.0,
                      k: float = 100.0) -> tuple[DiffusionModel, StructuralConstants]:
    """Regularized Bingham viscosity mu(t) = gamma/sqrt(t + 1/k^2) + 2 zeta.

    Band constants m_mu = 2 zeta and M_mu = 2 zeta + k gamma; psi has the
    closed form psi(s) = gamma (sqrt(s + 1/k^2) - 1/k) + zeta s.
    """
    eps = k ** -2
    model = DiffusionModel(
        mu=lambda t: gamma / np.sqrt(t + eps) + 2.0 * zeta,
        mu_prime=lambda t: -0.5 * gamma * (t + eps) ** -1.5,
        psi=lambda s: gamma * (np.sqrt(s + eps) - 1.0 / k) + zeta * s,
        m_mu=2.0 * zeta,
        M_mu=2.0 * zeta + k * gamma,
        name="bingham",
    )
    return model, StructuralConstants.from_mu_band(model.m_mu, model.M_mu)


def constant_model(c: float = 1.0) -> tuple[DiffusionModel, StructuralConstants]:
    """Constant coefficient mu = c; the operator is linear. Testing aid."""
    if c <= 0.0:
        raise ValueError("c must be positive")
    model = DiffusionModel(
        mu=lambda t: np.full_like(np.asarray(t, dtype=float), c),
        mu_prime=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
        psi=lambda s: 0.5 * c * np.asarray(s, dtype=float),
        m_mu=c,
        M_mu=c,
        name="constant",
    )
    return model, StructuralConstants.from_mu_band(c, c)


def exact_solution() -> tuple[Callable, Callable]:
    """Value and gradient callables of sin(pi x) sin(pi y).

    Vanishes on the boundaries of both supported domains, since every boundary
    segment lies on an integer line x or y in {-1, 0, 1}.
    """

    def value(x, y):
        return np.sin(np.pi * x) * np.sin(np.pi * y)

    def grad(x, y):
        return (np.pi * np.cos(np.pi * x) * np.sin(np.pi * y),
                np.pi * np.sin(np.pi * x) * np.cos(np.pi * y))

    return value, grad
