"""Structural parameters, derived steady-state quantities and the WUNK checks.

All rates are per quarter.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .errors import InvalidParameterError

__all__ = [
    "ModelParams",
    "Derived",
    "WunkReport",
    "StatReport",
    "derive",
    "check_wunk",
    "check_wunk_statistics",
    "require_wunk",
    "params_from_dict",
    "load_params",
    "P0",
]


@dataclass(frozen=True)
class ModelParams:
    """Structural parameters of the Euler-Phillips economy.

    Attributes
    ----------
    delta : time discount rate
    sigma : financial-intermediation spread (>= 0)
    epsilon : elasticity of substitution between goods (> 1)
    kappa : marginal disutility of labor
    gamma : price-adjustment cost
    a : technology level
    mu_w : marginal utility of wealth at zero relative wealth, u'(0)
    eta : inverse Frisch elasticity; 0 gives linear disutility of labor
    phi : inflation response of the normal-times policy rule
    beta : discount factor of the discrete-time model
    """

    delta: float
    epsilon: float
    kappa: float
    gamma: float
    a: float
    sigma: float = 0.0
    mu_w: float = 0.0
    eta: float = 0.0
    phi: float = 1.5
    beta: float = 0.99

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise InvalidParameterError(f"{f.name} must be a number, got {v!r}")
            if not math.isfinite(v):
                raise InvalidParameterError(f"{f.name} must be finite, got {v!r}")
            object.__setattr__(self, f.name, float(v))
        checks = (
            (self.epsilon > 1, "epsilon > 1"),
            (self.gamma > 0, "gamma > 0"),
            (self.delta > 0, "delta > 0"),
            (self.a > 0, "a > 0"),
            (self.kappa > 0, "kappa > 0"),
            (self.sigma >= 0, "sigma >= 0"),
            (self.mu_w >= 0, "mu_w >= 0"),
            (self.eta >= 0, "eta >= 0"),
            (self.phi >= 0, "phi >= 0"),
            (0 < self.beta < 1, "0 < beta < 1"),
        )
        for ok, rule in checks:
            if not ok:
                raise InvalidParameterError(f"invariant violated: {rule}")

    def replace(self, **changes) -> "ModelParams":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class Derived:
    y_n: float
    c_n: float
    r_n: float
    phillips_slope: float
    # eps*kappa/(gamma*a) * ((eps-1)/eps)**(eta/(1+eta)); slope*delta/(1+eta)
    phillips_gain: float


@dataclass(frozen=True)
class WunkReport:
    holds: bool
    lhs: float
    rhs: float
    delta_bound_ok: bool


@dataclass(frozen=True)
class StatReport:
    holds: bool
    lhs: float
    rhs: float


def derive(p: ModelParams) -> Derived:
    """Natural output/consumption, natural rate and steady-state Phillips slope."""
    e, k, g, a, d, eta = p.epsilon, p.kappa, p.gamma, p.a, p.delta, p.eta
    markdown = (e - 1) / e
    y_n = markdown * a / k
    if eta == 0:
        c_n = y_n
        gain = e * k / (g * a)
        slope = e * k / (d * g * a)
    else:
        c_n = markdown ** (1 / (1 + eta)) * a / k
        gain = e * k / (g * a) * markdown ** (eta / (1 + eta))
        slope = (1 + eta) * (e * k / (d * g * a)) * markdown ** (eta / (1 + eta))
    r_n = d - p.sigma - p.mu_w * c_n
    return Derived(y_n=y_n, c_n=c_n, r_n=r_n, phillips_slope=slope, phillips_gain=gain)


def check_wunk(p: ModelParams) -> WunkReport:
    """Does u'(0) strictly exceed the slope of the steady-state Phillips line?

    Equality is the NK boundary and reported as ``holds=False``.
    """
    rhs = derive(p).phillips_slope
    return WunkReport(
        holds=p.mu_w > rhs,
        lhs=p.mu_w,
        rhs=rhs,
        delta_bound_ok=p.delta > math.sqrt((p.epsilon - 1) / p.gamma),
    )


def check_wunk_statistics(delta: float, r_n: float, lam: float) -> StatReport:
    """WUNK condition from estimable statistics: delta - r_n > lam / delta.

    `lam` is the output-gap coefficient of a quarterly New Keynesian
    Phillips curve; `delta` and `r_n` are quarterly rates.
    """
    if not delta > 0:
        raise InvalidParameterError(f"delta must be positive, got {delta!r}")
    lhs = delta - r_n
    rhs = lam / delta
    return StatReport(holds=lhs > rhs, lhs=lhs, rhs=rhs)


def require_wunk(p: ModelParams) -> WunkReport:
    """Raise unless `p` belongs to the WUNK variant (strict condition and delta^2 > (epsilon-1)/gamma)."""
    rep = check_wunk(p)
    if not rep.holds:
        raise InvalidParameterError(
            f"WUNK condition violated: mu_w={rep.lhs:.6g} <= phillips slope {rep.rhs:.6g}"
        )
    if not rep.delta_bound_ok:
        raise InvalidParameterError("WUNK variant requires delta > sqrt((epsilon-1)/gamma)")
    return rep


_FIELD_NAMES = tuple(f.name for f in fields(ModelParams))


def params_from_dict(doc: dict) -> ModelParams:
    """Build parameters from a mapping; unknown keys are rejected."""
    if not isinstance(doc, dict):
        raise InvalidParameterError("parameter document must be a JSON object")
    unknown = sorted(set(doc) - set(_FIELD_NAMES))
    if unknown:
        raise InvalidParameterError(f"unknown parameter key(s): {', '.join(unknown)}")
    try:
        return ModelParams(**doc)
    except TypeError as exc:  # missing required field
        raise InvalidParameterError(str(exc)) from None


def load_params(path) -> ModelParams:
    with open(Path(path)) as fh:
        return params_from_dict(json.load(fh))


# Reference set used throughout the tests: WUNK at the ZLB with sigma = 0.
P0 = ModelParams(delta=0.108, sigma=0.0, epsilon=6.0, kappa=1.0, gamma=500.0, a=1.0, mu_w=0.15, eta=0.0, phi=1.5)
