"""Euler-Phillips vector fields, their linearizations and Jacobians.

Every field integrated by the scenario layer has the form::

    dx  = (w0 + w1*x) * (c0 + c1*(x - xr) + c2*pi)
    dpi = d0 + d1*(x - xr) + d2*pi

With ``w = (0, 1)`` this is the nonlinear log-utility system (x = output);
with ``w = (c_n, 0)`` it is the system linearized around the natural steady
state (x = private consumption, government spending entering ``d0``).
`QuadField` carries these nine coefficients so the compiled kernel can
integrate either one.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, InvalidParameterError, NotSteadyStateError
from .model import ModelParams, derive

__all__ = [
    "Regime",
    "State",
    "Velocity",
    "LinearSystem",
    "QuadField",
    "baseline_field",
    "linearized_field",
    "scenario_field",
    "field_baseline",
    "field_linearized_gov",
    "jacobian",
    "linear_gov_matrix",
]


class Regime(str, enum.Enum):
    NORMAL = "NormalRule"
    ZLB = "ZLB"
    PEG = "Peg"

    @property
    def at_zero_rate(self) -> bool:
        return self is not Regime.NORMAL


class State(NamedTuple):
    x: float
    pi: float


class Velocity(NamedTuple):
    dx: float
    dpi: float


@dataclass(frozen=True)
class LinearSystem:
    m11: float
    m12: float
    m21: float
    m22: float
    x_star: float
    pi_star: float

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])

    @property
    def point(self) -> State:
        return State(self.x_star, self.pi_star)

    @classmethod
    def from_matrix(cls, m, x_star=0.0, pi_star=0.0) -> "LinearSystem":
        m = np.asarray(m, dtype=float)
        return cls(float(m[0, 0]), float(m[0, 1]), float(m[1, 0]), float(m[1, 1]), float(x_star), float(pi_star))


@dataclass(frozen=True)
class QuadField:
    w0: float
    w1: float
    c0: float
    c1: float
    c2: float
    xr: float
    d0: float
    d1: float
    d2: float
    regime: Regime = Regime.ZLB
    linearized: bool = False

    def __call__(self, x, pi):
        dx = (self.w0 + self.w1 * x) * (self.c0 + self.c1 * (x - self.xr) + self.c2 * pi)
        dpi = self.d0 + self.d1 * (x - self.xr) + self.d2 * pi
        return dx, dpi

    def coeffs(self) -> np.ndarray:
        return np.array(
            [self.w0, self.w1, self.c0, self.c1, self.c2, self.xr, self.d0, self.d1, self.d2],
            dtype=np.float64,
        )


def _euler_terms(p: ModelParams, regime: Regime, r_n: float):
    # r - r_n + u'(0)(x - x_n) split into constant and pi coefficient
    if regime.at_zero_rate:
        return -r_n, -1.0
    return 0.0, p.phi - 1.0


def baseline_field(p: ModelParams, regime: Regime) -> QuadField:
    """Nonlinear Euler-Phillips field of the linear-disutility (eta = 0) model."""
    if p.eta != 0:
        raise InvalidParameterError("baseline_field requires eta = 0; use linearized_field for eta > 0")
    regime = Regime(regime)
    dv = derive(p)
    c0, c2 = _euler_terms(p, regime, dv.r_n)
    return QuadField(
        w0=0.0, w1=1.0, c0=c0, c1=p.mu_w, c2=c2, xr=dv.y_n,
        d0=0.0, d1=-dv.phillips_gain, d2=p.delta, regime=regime,
    )


def linearized_field(p: ModelParams, regime: Regime, g: float = 0.0) -> QuadField:
    """Field linearized around [c = c_n, pi = 0, g = 0] (government-spending model)."""
    regime = Regime(regime)
    dv = derive(p)
    c0, c2 = _euler_terms(p, regime, dv.r_n)
    return QuadField(
        w0=dv.c_n, w1=0.0, c0=c0, c1=p.mu_w, c2=c2, xr=dv.c_n,
        d0=-dv.phillips_gain * p.eta * g,
        d1=-dv.phillips_gain * (1 + p.eta),
        d2=p.delta, regime=regime, linearized=True,
    )


def scenario_field(p: ModelParams, regime: Regime, g: float = 0.0) -> QuadField:
    """Field used by trajectories: nonlinear for eta = 0, linearized for eta > 0."""
    if p.eta == 0:
        if g != 0:
            raise InvalidParameterError("government spending requires eta > 0")
        return baseline_field(p, regime)
    return linearized_field(p, regime, g)


def field_baseline(s: State, p: ModelParams, r: Regime, g: float = 0.0) -> Velocity:
    """Nonlinear vector field at state `s`.

    eta = 0: (dy, dpi) from the Euler equation and the Phillips curve.
    eta > 0: (dc, dpi) of the government-spending model with y = c + g.
    """
    x, pi = float(s[0]), float(s[1])
    if not x > 0:
        raise DomainError(f"nonlinear field undefined for x <= 0 (x={x!r})")
    if g < 0:
        raise InvalidParameterError("government spending must be >= 0")
    if p.eta == 0:
        if g != 0:
            raise InvalidParameterError("government spending requires eta > 0")
        return Velocity(*baseline_field(p, r)(x, pi))
    r = Regime(r)
    dv = derive(p)
    c0, c2 = _euler_terms(p, r, dv.r_n)
    dx = x * (c0 + p.mu_w * (x - dv.c_n) + c2 * pi)
    e, eta = p.epsilon, p.eta
    y = x + g
    cost = e / (e - 1) * (p.kappa / p.a) ** (1 + eta) * y**eta * x
    dpi = p.delta * pi + (e - 1) * y / (p.gamma * x) * (1 - cost)
    return Velocity(dx, dpi)


def field_linearized_gov(s: State, p: ModelParams, r: Regime, g: float = 0.0) -> Velocity:
    """Linearized government-spending system evaluated at `s`."""
    return Velocity(*linearized_field(p, r, g)(float(s[0]), float(s[1])))


def linear_gov_matrix(p: ModelParams, r: Regime) -> np.ndarray:
    f = linearized_field(p, r)
    return np.array([[f.w0 * f.c1, f.w0 * f.c2], [f.d1, f.d2]])


def jacobian(p: ModelParams, r: Regime, at: State, g: float = 0.0, tol: float = 1e-9) -> LinearSystem:
    """2x2 linearization at a steady state of the scenario field.

    Raises NotSteadyStateError if `at` does not zero the field to `tol`.
    """
    f = scenario_field(p, r, g)
    x, pi = float(at[0]), float(at[1])
    dx, dpi = f(x, pi)
    res = float(np.hypot(dx, dpi))
    if not res <= tol:
        raise NotSteadyStateError(res)
    if f.linearized:
        m11, m12 = f.w0 * f.c1, f.w0 * f.c2
    else:
        m11, m12 = f.c1 * x, f.c2 * x
    return LinearSystem(m11, m12, f.d1, f.d2, x, pi)
