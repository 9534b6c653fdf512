"""Discrete-time version of the model: exact residuals, log-linear coefficients,
the forward-solved output gap and the short-period limit of the one-step map."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .dynamics import Regime, State, jacobian
from .errors import DomainError, InvalidParameterError
from .model import ModelParams, derive

__all__ = [
    "loglin_coeffs",
    "euler_residual_discrete",
    "phillips_residual_discrete",
    "DiscretePath",
    "ForwardSolution",
    "forward_solve_output",
    "one_step_map",
    "continuous_matrix",
    "map_error",
    "dt_convergence",
]


def loglin_coeffs(p: ModelParams) -> tuple:
    """(alpha, phillips_coeff): discount on future output in the log-linear
    Euler equation and the output-gap coefficient of the Phillips curve."""
    y_n = derive(p).y_n
    return p.beta / (p.beta + p.mu_w * y_n), (p.epsilon - 1) / p.gamma


def _positive(**vals):
    for k, v in vals.items():
        if not (math.isfinite(v) and v > 0):
            raise DomainError(f"{k} must be positive and finite, got {v!r}")


def euler_residual_discrete(q, y_t, y_t1, p_t, p_t1, p: ModelParams) -> float:
    """q - u'(0) y_t - beta p_t y_t / (p_t1 y_t1), with q the gross nominal rate."""
    _positive(q=q, y_t=y_t, y_t1=y_t1, p_t=p_t, p_t1=p_t1)
    return q - p.mu_w * y_t - p.beta * (p_t * y_t) / (p_t1 * y_t1)


def phillips_residual_discrete(p_prev, p_t, p_next, y_t, p: ModelParams) -> float:
    """LHS minus RHS of the quadratic-adjustment-cost Phillips curve."""
    _positive(p_prev=p_prev, p_t=p_t, p_next=p_next, y_t=y_t)
    g0 = p_t / p_prev
    g1 = p_next / p_t
    y_n = derive(p).y_n
    return g0 * (g0 - 1) - p.beta * g1 * (g1 - 1) - (p.epsilon - 1) / p.gamma * (y_t / y_n - 1)


@dataclass(frozen=True)
class DiscretePath:
    """Policy rate i(k) and inflation pi(k+1) for k = 0..K (net rates per period)."""

    i: np.ndarray
    pi_next: np.ndarray

    def __post_init__(self):
        i = np.asarray(self.i, dtype=float)
        pn = np.asarray(self.pi_next, dtype=float)
        if i.ndim != 1 or i.shape != pn.shape:
            raise InvalidParameterError("i and pi_next must be 1-D sequences of equal length")
        if i.size == 0:
            raise InvalidParameterError("path must contain at least one period")
        if not (np.all(np.isfinite(i)) and np.all(np.isfinite(pn))):
            raise InvalidParameterError("path entries must be finite")
        object.__setattr__(self, "i", i)
        object.__setattr__(self, "pi_next", pn)

    @property
    def horizon(self) -> int:
        return self.i.size - 1


@dataclass(frozen=True)
class ForwardSolution:
    y0: float
    # neglected part is exactly tail_factor * yhat(K + 1)
    tail_factor: float


def forward_solve_output(path: DiscretePath, p: ModelParams, r_n: float) -> ForwardSolution:
    """yhat(0) = -sum_k alpha^k [i(k) - r_n - alpha pi(k+1)], truncated at K."""
    alpha, _ = loglin_coeffs(p)
    k = np.arange(path.i.size)
    w = alpha**k
    gaps = path.i - r_n - alpha * path.pi_next
    return ForwardSolution(float(-np.sum(w * gaps)), float(alpha ** (path.horizon + 1)))


def one_step_map(p: ModelParams, dt: float) -> np.ndarray:
    """Log-linear discrete dynamics over one period of length `dt` under the
    normal rule, in (output gap, annualized inflation) coordinates.

    beta = exp(-delta dt), u'(0) -> u'(0) dt, gamma -> gamma / dt**2, and
    per-period inflation is pi * dt.
    """
    if not dt > 0:
        raise InvalidParameterError("dt must be positive")
    y_n = derive(p).y_n
    beta = math.exp(-p.delta * dt)
    alpha = beta / (beta + p.mu_w * dt * y_n)
    c = (p.epsilon - 1) * dt / p.gamma
    return np.array(
        [
            [1 / alpha + c * dt / beta, p.phi * dt / alpha - dt / beta],
            [-c / beta, 1 / beta],
        ]
    )


def continuous_matrix(p: ModelParams) -> np.ndarray:
    """Jacobian at the natural steady state, rescaled to the output gap y/y_n - 1."""
    dv = derive(p)
    J = jacobian(p.replace(eta=0.0), Regime.NORMAL, State(dv.y_n, 0.0)).matrix
    S = np.diag([dv.y_n, 1.0])
    return np.linalg.solve(S, J @ S)


def map_error(p: ModelParams, dt: float) -> float:
    """Max entrywise gap between the discrete one-step map and exp(M dt)."""
    return float(np.max(np.abs(one_step_map(p, dt) - expm(continuous_matrix(p) * dt))))


def dt_convergence(p: ModelParams, dt0: float = 0.1, halvings: int = 5) -> list:
    """[(dt, error, ratio to previous error)] for successive halvings of dt."""
    out, prev = [], None
    dt = dt0
    for _ in range(halvings + 1):
        e = map_error(p, dt)
        out.append((dt, e, prev / e if prev else math.nan))
        prev, dt = e, dt / 2
    return out
