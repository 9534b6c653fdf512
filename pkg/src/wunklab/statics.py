"""Comparative statics of the permanent-ZLB steady state.

Derivatives are taken analytically from the closed-form steady state and
cross-checked by central finite differences.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .analysis import steady_state
from .dynamics import Regime, State
from .errors import InvalidParameterError
from .model import ModelParams, derive, require_wunk
from .scenarios import multiplier_limit

__all__ = ["SHOCKS", "StaticsReport", "comparative_static", "zlb_state"]

# shock id -> (parameter moved, paradox name)
SHOCKS = {
    "mu_w": ("mu_w", "thrift"),
    "kappa": ("kappa", "toil"),
    "a": ("a", "technology"),
    "gamma": ("gamma", "flexibility"),
    "g": ("g", "spending"),
}

FD_REL_STEP = 1e-6


@dataclass(frozen=True)
class StaticsReport:
    shock: str
    paradox: str
    base: State
    shocked: State
    analytic: tuple  # (d x, d pi) per unit of the parameter
    finite_difference: tuple
    output_derivative: float  # d(c + g) / d theta; equals d x except for g
    verdict: str  # "holds", "fails" or "inconclusive"
    hours_derivative: float | None = None
    multiplier: float | None = None

    def to_dict(self) -> dict:
        return {
            "shock": self.shock,
            "paradox": self.paradox,
            "base": {"x": self.base.x, "pi": self.base.pi},
            "shocked": {"x": self.shocked.x, "pi": self.shocked.pi},
            "analytic": {"dx": self.analytic[0], "dpi": self.analytic[1]},
            "finite_difference": {"dx": self.finite_difference[0], "dpi": self.finite_difference[1]},
            "dy": self.output_derivative,
            "dh": self.hours_derivative,
            "multiplier": self.multiplier,
            "verdict": self.verdict,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def zlb_state(p: ModelParams, g: float = 0.0) -> State:
    return steady_state(p, Regime.ZLB, g)


def _analytic(p: ModelParams, theta: str, g: float):
    """(dc, dpi) of the ZLB steady state with respect to `theta`."""
    dv = derive(p)
    eta, u = p.eta, p.mu_w
    c_n, r_n = dv.c_n, dv.r_n
    s0 = dv.phillips_slope / (1 + eta)

    dc_n = {"kappa": -c_n / p.kappa, "a": c_n / p.a}.get(theta, 0.0)
    ds0 = {"kappa": s0 / p.kappa, "gamma": -s0 / p.gamma, "a": -s0 / p.a}.get(theta, 0.0)
    du = 1.0 if theta == "mu_w" else 0.0
    dg = 1.0 if theta == "g" else 0.0
    dr_n = -du * c_n - u * dc_n

    D = u - (1 + eta) * s0
    dD = du - (1 + eta) * ds0
    Nm = r_n + s0 * eta * g
    dNm = dr_n + ds0 * eta * g + s0 * eta * dg
    P = (1 + eta) * r_n + u * eta * g
    dP = (1 + eta) * dr_n + du * eta * g + u * eta * dg

    dc = dc_n + (dNm * D - Nm * dD) / D**2
    dpi = (ds0 * P + s0 * dP) / D - s0 * P * dD / D**2
    return dc, dpi


def _sign_verdict(signs) -> str:
    if any(v == 0 for v, _ in signs):
        return "inconclusive"
    return "holds" if all((v > 0) == want for v, want in signs) else "fails"


def comparative_static(p: ModelParams, shock: str, h: float = FD_REL_STEP, g: float = 0.0) -> StaticsReport:
    """Effect of a permanent change in one parameter on the ZLB steady state.

    Requires WUNK parameters with a negative natural rate.  Shock ids:
    mu_w (thrift), kappa (toil), a (technology), gamma (flexibility),
    g (government spending, eta > 0).
    """
    if shock not in SHOCKS:
        raise InvalidParameterError(f"unknown shock {shock!r}; choose from {sorted(SHOCKS)}")
    theta, paradox = SHOCKS[shock]
    require_wunk(p)
    if not derive(p).r_n < 0:
        raise InvalidParameterError(f"natural rate must be negative for a permanent ZLB (r_n={derive(p).r_n:.6g})")
    if theta == "g" and not p.eta > 0:
        raise InvalidParameterError("the spending shock requires eta > 0")

    base = zlb_state(p, g)
    dc, dpi = _analytic(p, theta, g)

    val = g if theta == "g" else getattr(p, theta)
    step = h * abs(val) if val != 0 else h

    def at(v):
        if theta == "g":
            return zlb_state(p, v)
        return zlb_state(p.replace(**{theta: v}), g)

    up = at(val + step)
    if theta == "g" and val - step < 0:
        # spending cannot go negative: second-order one-sided stencil
        f0, f2 = at(val), at(val + 2 * step)
        fd = tuple((-3 * a0 + 4 * a1 - a2) / (2 * step) for a0, a1, a2 in zip(f0, up, f2))
    else:
        dn = at(val - step)
        fd = ((up.x - dn.x) / (2 * step), (up.pi - dn.pi) / (2 * step))
    shocked = up

    dy = dc + (1.0 if theta == "g" else 0.0)
    dh = None
    mult = None
    if theta == "mu_w":
        verdict = _sign_verdict([(dy, False), (dpi, False)])
    elif theta == "kappa":
        dh = dy / p.a
        verdict = _sign_verdict([(dy, True), (dpi, True), (dh, True)])
    elif theta == "a":
        dh = dy / p.a - (base.x + g) / p.a**2
        verdict = _sign_verdict([(dy, False), (dpi, False), (dh, False)])
    elif theta == "gamma":
        verdict = _sign_verdict([(dy, True), (dpi, True)])
    else:
        mult = multiplier_limit(p)
        verdict = _sign_verdict([(dc, True), (dpi, True)])
        if verdict == "holds" and not abs(dy - mult) <= 1e-9:
            verdict = "fails"
    return StaticsReport(
        shock=shock, paradox=paradox, base=base, shocked=shocked,
        analytic=(dc, dpi), finite_difference=fd, output_derivative=dy,
        verdict=verdict, hours_derivative=dh, multiplier=mult,
    )
