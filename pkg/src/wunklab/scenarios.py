"""ZLB episodes, forward guidance and government spending as terminal-value problems.

Each scenario ends at the natural steady state and is integrated backward.
Thresholds Delta*, g* and T* are found by root finding on the distance to the
relevant invariant line or by scanning a guidance-duration grid.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass, field as dc_field
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .analysis import Kind, classify, invariant_lines, signed_distance, steady_state
from .dynamics import Regime, State, jacobian, scenario_field
from .errors import (
    BracketError, ConfigError, DivergenceError, InfiniteLimitError, InvalidParameterError, PositivityBreach,
)
from .integrate import DEFAULT_STEP, X_MIN, Trajectory, concatenate, integrate_backward
from .model import ModelParams, derive, require_wunk

__all__ = [
    "ScenarioKind",
    "Scenario",
    "ThresholdReport",
    "phase_params",
    "run_scenario",
    "multiplier",
    "multiplier_limit",
    "guidance_threshold_nk",
    "spending_threshold_nk",
    "zlb_threshold_wunk",
    "wunk_delta_max",
]


class ScenarioKind(str, enum.Enum):
    ZLB_EPISODE = "ZlbEpisode"
    FORWARD_GUIDANCE = "ForwardGuidance"
    GOV_SPENDING = "GovSpending"


@dataclass(frozen=True)
class Scenario:
    """Policy experiment.

    The negative natural rate during the ZLB phase comes from a spread shock
    (`sigma_zlb`) or, alternatively, a shock to the marginal utility of wealth
    (`mu_w_zlb`); the same pair exists for the phase after T.  Unset values
    fall back to the base parameters (spread after T defaults to zero).
    """

    kind: ScenarioKind
    T: float
    delta: float = 0.0
    g: float = 0.0
    sigma_zlb: Optional[float] = None
    sigma_normal: Optional[float] = None
    mu_w_zlb: Optional[float] = None
    mu_w_normal: Optional[float] = None

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", ScenarioKind(self.kind))
        except ValueError:
            raise ConfigError(f"unknown scenario kind {self.kind!r}") from None
        for name in ("T", "delta", "g"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ConfigError(f"scenario.{name} must be a finite number")
        if not self.T > 0:
            raise ConfigError("scenario.T must be > 0")
        if self.delta < 0:
            raise ConfigError("scenario.delta must be >= 0")
        if self.g < 0:
            raise ConfigError("scenario.g must be >= 0")
        if self.sigma_zlb is not None and self.mu_w_zlb is not None:
            raise ConfigError("scenario: set either sigma_zlb or mu_w_zlb, not both")
        if self.sigma_normal is not None and self.mu_w_normal is not None:
            raise ConfigError("scenario: set either sigma_normal or mu_w_normal, not both")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["kind"] = self.kind.value
        return d


def phase_params(p: ModelParams, s: Scenario, phase: str) -> ModelParams:
    """Parameters in force during the 'zlb' phase (t < T) or the 'normal' phase."""
    if phase == "zlb":
        sigma = p.sigma if s.sigma_zlb is None else s.sigma_zlb
        mu_w = p.mu_w if s.mu_w_zlb is None else s.mu_w_zlb
    elif phase == "normal":
        sigma = 0.0 if s.sigma_normal is None else s.sigma_normal
        mu_w = p.mu_w if s.mu_w_normal is None else s.mu_w_normal
    else:
        raise ValueError(f"unknown phase {phase!r}")
    return p.replace(sigma=sigma, mu_w=mu_w)


def _check_scenario(p: ModelParams, s: Scenario):
    pz = phase_params(p, s, "zlb")
    if not derive(pz).r_n < 0:
        raise ConfigError(f"natural rate during the ZLB phase must be negative (r_n={derive(pz).r_n:.6g})")
    if s.kind is ScenarioKind.FORWARD_GUIDANCE:
        pn = phase_params(p, s, "normal")
        if not derive(pn).r_n > 0:
            raise ConfigError(
                f"natural rate after the ZLB must be positive for forward guidance (r_n={derive(pn).r_n:.6g})"
            )
    if s.kind is ScenarioKind.GOV_SPENDING and not p.eta > 0:
        raise ConfigError("GovSpending requires eta > 0")
    if s.kind is not ScenarioKind.GOV_SPENDING and s.g != 0:
        raise ConfigError("scenario.g is only meaningful for GovSpending")
    return pz


def _guard(p: ModelParams):
    # the linearized spending system is not restricted in sign
    return X_MIN if p.eta == 0 else None


def _natural(p: ModelParams) -> State:
    dv = derive(p)
    return State(dv.c_n, 0.0)


def _guidance_segment(pn: ModelParams, T: float, delta: float, step: float, backend=None) -> Trajectory:
    """Peg phase over [T, T + delta], ending at the natural steady state."""
    return integrate_backward(
        scenario_field(pn, Regime.PEG), _natural(pn), T + delta, step,
        t_start=T, x_min=_guard(pn), backend=backend,
    )


def run_scenario(p: ModelParams, s: Scenario, step: float = DEFAULT_STEP, backend=None) -> Trajectory:
    """Integrate a scenario backward from its terminal condition.

    Raises PositivityBreach when output collapses to zero (NK region).
    """
    pz = _check_scenario(p, s)
    g = s.g if s.kind is ScenarioKind.GOV_SPENDING else 0.0
    zlb = scenario_field(pz, Regime.ZLB, g)
    if s.kind is ScenarioKind.FORWARD_GUIDANCE and s.delta > 0:
        pn = phase_params(p, s, "normal")
        tail = _guidance_segment(pn, s.T, s.delta, step, backend)
        head = integrate_backward(zlb, tail.initial, s.T, step, x_min=_guard(pz), backend=backend)
        return concatenate(head, tail)
    return integrate_backward(zlb, _natural(pz), s.T, step, x_min=_guard(pz), backend=backend)


def multiplier_limit(p: ModelParams) -> float:
    """Long-episode limit of the government-spending multiplier.

    Raises InfiniteLimitError when the denominator is not positive (NK case).
    """
    if p.eta == 0:
        return 1.0
    e, eta = p.epsilon, p.eta
    den = (
        p.mu_w * (p.delta * p.gamma * p.a / (e * p.kappa)) * (e / (e - 1)) ** (eta / (1 + eta))
        - (1 + eta)
    )
    if not den > 0:
        raise InfiniteLimitError(f"multiplier diverges with the ZLB duration (denominator {den:.6g} <= 0)")
    return 1.0 + eta / den


def multiplier(
    p: ModelParams,
    T: float,
    g: float,
    s: float,
    step: float = DEFAULT_STEP,
    *,
    sigma_zlb: Optional[float] = None,
    mu_w_zlb: Optional[float] = None,
    backend=None,
) -> float:
    """Centered-difference multiplier 1 + [c(0; g + s/2) - c(0; g - s/2)] / s."""
    if not p.eta > 0:
        raise InvalidParameterError("the multiplier requires eta > 0")
    if not s > 0:
        raise InvalidParameterError("difference width s must be > 0")
    if g - s / 2 < 0:
        raise InvalidParameterError("g - s/2 must be >= 0")
    c0 = []
    for gg in (g + s / 2, g - s / 2):
        sc = Scenario(ScenarioKind.GOV_SPENDING, T, g=gg, sigma_zlb=sigma_zlb, mu_w_zlb=mu_w_zlb)
        c0.append(run_scenario(p, sc, step, backend).x[0])
    return 1.0 + (c0[0] - c0[1]) / s


@dataclass
class ThresholdReport:
    value: float
    residual: float
    iterations: int
    step: float
    extra: dict = dc_field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {"value": self.value, "residual": self.residual, "iterations": self.iterations, "step": self.step}
        d.update(self.extra)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)


def _unstable_line(p: ModelParams, g: float = 0.0):
    z = steady_state(p, Regime.ZLB, g)
    L = jacobian(p, Regime.ZLB, z, g)
    if classify(L).kind is not Kind.SADDLE:
        raise InvalidParameterError("the ZLB system is not a saddle; thresholds of this kind need NK parameters")
    return invariant_lines(L).unstable[0]


def _require_nk(p: ModelParams):
    if p.mu_w != 0:
        raise InvalidParameterError("NK threshold requires mu_w = 0")


def guidance_threshold_nk(
    p: ModelParams,
    sigma_zlb: Optional[float] = None,
    tol: float = 1e-8,
    *,
    sigma_normal: Optional[float] = None,
    step: float = DEFAULT_STEP,
    delta_max: float = 1e3,
    max_iter: int = 200,
    backend=None,
) -> ThresholdReport:
    """Guidance duration that puts the state at T on the ZLB unstable line.

    Shorter guidance leaves the economy below the line (slump as T grows),
    longer guidance puts it above (boom).  Bisection on Delta.
    """
    _require_nk(p)
    sc = Scenario(ScenarioKind.FORWARD_GUIDANCE, 1.0, 0.0, sigma_zlb=sigma_zlb, sigma_normal=sigma_normal)
    pz = _check_scenario(p, sc)
    pn = phase_params(p, sc, "normal")
    line = _unstable_line(pz)

    def dist(delta):
        if delta == 0:
            return signed_distance(line, _natural(pn))
        return signed_distance(line, _guidance_segment(pn, 0.0, delta, step, backend).initial)

    lo, d_lo = 0.0, dist(0.0)
    if d_lo == 0:
        return ThresholdReport(0.0, 0.0, 0, step)
    hi, it = 1.0, 0
    while True:
        try:
            d_hi = dist(hi)
        except (PositivityBreach, DivergenceError):
            d_hi = math.nan
        if math.isfinite(d_hi) and np.sign(d_hi) != np.sign(d_lo):
            break
        if math.isfinite(d_hi):
            lo, d_lo = hi, d_hi
        hi *= 2
        it += 1
        if hi > delta_max or not math.isfinite(d_hi):
            raise BracketError(f"distance to the unstable line keeps its sign on [0, {min(hi, delta_max):g}]")
    d_mid = d_lo
    mid = lo
    while it < max_iter:
        it += 1
        mid = 0.5 * (lo + hi)
        d_mid = dist(mid)
        if abs(d_mid) < tol or hi - lo < 1e-15 * max(1.0, hi):
            break
        if np.sign(d_mid) == np.sign(d_lo):
            lo, d_lo = mid, d_mid
        else:
            hi = mid
    if not abs(d_mid) < tol:
        raise BracketError(f"bisection stalled with residual {abs(d_mid):.3e}")
    return ThresholdReport(mid, abs(d_mid), it, step)


def spending_threshold_nk(
    p: ModelParams,
    sigma_zlb: Optional[float] = None,
    tol: float = 1e-8,
    *,
    g_max: float = 10.0,
) -> ThresholdReport:
    """Spending level that puts the natural steady state on the ZLB unstable line."""
    _require_nk(p)
    if not p.eta > 0:
        raise InvalidParameterError("spending threshold requires eta > 0")
    sc = Scenario(ScenarioKind.GOV_SPENDING, 1.0, sigma_zlb=sigma_zlb)
    pz = _check_scenario(p, sc)
    target = _natural(pz)

    def dist(g):
        return signed_distance(_unstable_line(pz, g), target)

    d0 = dist(0.0)
    if d0 == 0:
        return ThresholdReport(0.0, 0.0, 0, 0.0)
    hi, it = 1e-3, 0
    while np.sign(dist(hi)) == np.sign(d0):
        hi *= 2
        it += 1
        if hi > g_max:
            raise BracketError(f"distance keeps its sign for g in [0, {g_max:g}]")
    root, rr = brentq(dist, 0.0, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, full_output=True)
    res = abs(dist(root))
    if not res < tol:
        raise BracketError(f"root finder residual {res:.3e} above tolerance")
    return ThresholdReport(root, res, it + rr.iterations, 0.0)


def wunk_delta_max(
    p: ModelParams, s: Scenario, step: float = 1e-2, tol: float = 1e-6, chunk: float = 100.0, limit: float = 1e5,
    backend=None,
) -> float:
    """Guidance duration beyond which the state at T stops moving (within `tol` of
    the forward-guidance steady state)."""
    pn = phase_params(p, s, "normal")
    zf = steady_state(pn, Regime.PEG)
    f = scenario_field(pn, Regime.PEG)
    z, t = _natural(pn), 0.0
    while t < limit:
        tr = integrate_backward(f, z, chunk, step, backend=backend)
        d = np.hypot(tr.x[::-1] - zf.x, tr.pi[::-1] - zf.pi)
        hit = np.flatnonzero(d < tol)
        if hit.size:
            return t + hit[0] * tr.step
        z, t = tr.initial, t + chunk
    raise BracketError(f"guidance steady state not reached within {limit:g} quarters")


def _last_nonneg_time(f, z, zs: State, step, tol, chunk, limit, backend):
    """Largest backward time tau with pi(tau) >= 0, integrating until the path
    has settled at the (negative-inflation) ZLB steady state."""
    t0, last = 0.0, (0.0 if z[1] >= 0 else None)
    while t0 < limit:
        tr = integrate_backward(f, z, chunk, step, backend=backend)
        pis = tr.pi[::-1]
        xs = tr.x[::-1]
        nn = np.flatnonzero(pis >= 0)
        if nn.size:
            i = nn[-1]
            if i + 1 < len(pis):
                # refine the crossing inside [i, i + 1] by bisection on the sub-step
                a, b = 0.0, tr.step
                zi = State(xs[i], pis[i])
                for _ in range(60):
                    m = 0.5 * (a + b)
                    if m in (a, b):
                        break
                    q = integrate_backward(f, zi, m, m, backend=backend).initial
                    if q.pi >= 0:
                        a = m
                    else:
                        b = m
                last = t0 + i * tr.step + a
            else:
                last = t0 + i * tr.step
        d = math.hypot(xs[-1] - zs.x, pis[-1] - zs.pi)
        if pis[-1] < 0 and d < tol:
            return last if last is not None else 0.0
        z, t0 = State(xs[-1], pis[-1]), t0 + chunk
    raise BracketError(f"ZLB path did not settle within {limit:g} quarters")


def zlb_threshold_wunk(
    p: ModelParams,
    sigma_zlb: Optional[float] = None,
    delta_max: Optional[float] = None,
    grid: int = 41,
    tol: float = 1e-6,
    *,
    sigma_normal: Optional[float] = None,
    mu_w_zlb: Optional[float] = None,
    mu_w_normal: Optional[float] = None,
    step: float = 1e-2,
    chunk: float = 100.0,
    limit: float = 1e5,
    backend=None,
) -> ThresholdReport:
    """ZLB duration beyond which any guidance in [0, delta_max] still yields a slump.

    For each guidance duration on a uniform grid, T_hat is the last ZLB
    duration with pi(0) >= 0; the result is the largest T_hat.  The grid
    spacing is reported in ``extra['grid_resolution']``.
    """
    sc = Scenario(
        ScenarioKind.FORWARD_GUIDANCE, 1.0, 0.0, sigma_zlb=sigma_zlb, sigma_normal=sigma_normal,
        mu_w_zlb=mu_w_zlb, mu_w_normal=mu_w_normal,
    )
    pz = _check_scenario(p, sc)
    pn = phase_params(p, sc, "normal")
    require_wunk(pz)
    require_wunk(pn)
    if grid < 1:
        raise InvalidParameterError("grid must contain at least one point")
    if delta_max is None:
        delta_max = wunk_delta_max(p, sc, step, tol, chunk, limit, backend)
    deltas = np.linspace(0.0, delta_max, grid) if grid > 1 else np.array([0.0])
    f = scenario_field(pz, Regime.ZLB)
    zs = steady_state(pz, Regime.ZLB)
    rows = []
    for d in deltas:
        z = _natural(pn) if d == 0 else _guidance_segment(pn, 0.0, float(d), step, backend).initial
        rows.append(_last_nonneg_time(f, z, zs, step, tol, chunk, limit, backend))
    rows = np.asarray(rows)
    j = int(np.argmax(rows))
    res = float(deltas[1] - deltas[0]) if grid > 1 else 0.0
    return ThresholdReport(
        float(rows[j]), 0.0, len(deltas), step,
        extra={
            "delta_max": float(delta_max),
            "grid_resolution": res,
            "argmax_delta": float(deltas[j]),
            "deltas": deltas.tolist(),
            "t_hat": rows.tolist(),
        },
    )
