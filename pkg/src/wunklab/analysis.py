"""Steady states, trace-determinant classification, invariant lines, nullclines."""

from __future__ import annotations

import cmath
import enum
import io
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .dynamics import LinearSystem, Regime, State, field_baseline, scenario_field
from .errors import (
    ClassificationBoundaryError,
    ComplexEigenvalueError,
    DegenerateSystemError,
    DomainError,
    InvalidParameterError,
    NonPositiveOutputError,
    RepeatedEigenvalueError,
)
from .model import ModelParams, derive

__all__ = [
    "Kind",
    "Classification",
    "Line",
    "InvariantLines",
    "NullLine",
    "Nullclines",
    "steady_state",
    "classify",
    "invariant_lines",
    "signed_distance",
    "nullclines",
    "phase_field",
    "phase_field_csv",
    "nullclines_csv",
]

DET_TOL = 1e-14
TRACE_TOL = 1e-14
DISC_TOL = 1e-12


class Kind(str, enum.Enum):
    SADDLE = "Saddle"
    NODAL_SOURCE = "NodalSource"
    SPIRAL_SOURCE = "SpiralSource"
    NODAL_SINK = "NodalSink"
    SPIRAL_SINK = "SpiralSink"
    CENTER = "Center"

    @property
    def is_source(self) -> bool:
        return self in (Kind.NODAL_SOURCE, Kind.SPIRAL_SOURCE)


@dataclass(frozen=True)
class Classification:
    kind: Kind
    trace: float
    det: float
    discriminant: float
    eigenvalues: tuple
    eigenvectors: Optional[tuple]  # unit 2-vectors, None for complex pairs


@dataclass(frozen=True)
class Line:
    point: State
    direction: np.ndarray
    eigenvalue: float

    @property
    def stable(self) -> bool:
        return self.eigenvalue < 0


class InvariantLines(NamedTuple):
    stable: list
    unstable: list


def _linear_steady_state(p: ModelParams, regime: Regime, g: float) -> State:
    dv = derive(p)
    eta, u = p.eta, p.mu_w
    if not regime.at_zero_rate:
        if g == 0:
            return State(dv.c_n, 0.0)
        # Normal rule with spending: solve the affine system directly.
        f = scenario_field(p, regime, g)
        a = np.array([[f.w0 * f.c1, f.w0 * f.c2], [f.d1, f.d2]])
        if abs(np.linalg.det(a)) < DET_TOL:
            raise DegenerateSystemError("singular linearized system under the normal rule")
        dev = np.linalg.solve(a, [-f.w0 * f.c0, -f.d0])
        return State(float(dv.c_n + dev[0]), float(dev[1]))
    s0 = dv.phillips_slope / (1 + eta)
    denom = u - dv.phillips_slope
    if abs(denom) < DET_TOL:
        raise DegenerateSystemError("mu_w equals the Phillips slope: Euler and Phillips lines are parallel")
    c = dv.c_n + (dv.r_n + s0 * eta * g) / denom
    pi = s0 * ((1 + eta) * dv.r_n + u * eta * g) / denom
    return State(c, pi)


def steady_state(p: ModelParams, r: Regime, g: float = 0.0) -> State:
    """Closed-form steady state of the scenario field.

    eta = 0 uses the nonlinear model, where output must be positive.
    eta > 0 uses the system linearized around the natural steady state; its
    steady state is not restricted in sign.
    """
    r = Regime(r)
    if g < 0:
        raise InvalidParameterError("government spending must be >= 0")
    if p.eta > 0:
        return _linear_steady_state(p, r, g)
    if g != 0:
        raise InvalidParameterError("government spending requires eta > 0")
    dv = derive(p)
    if not r.at_zero_rate:
        return State(dv.y_n, 0.0)
    u, s = p.mu_w, dv.phillips_slope
    if u == 0:
        if dv.r_n == 0:
            raise DegenerateSystemError("NK model at the ZLB with r_n = 0 has a continuum of steady states")
        y = dv.y_n - (p.delta * p.gamma * p.a / (p.epsilon * p.kappa)) * dv.r_n
        pi = -dv.r_n
    else:
        if abs(u - s) < DET_TOL:
            raise DegenerateSystemError("mu_w equals the Phillips slope: Euler and Phillips lines are parallel")
        pi = dv.r_n / (u * p.delta / dv.phillips_gain - 1)
        y = dv.y_n + dv.r_n / (u - s)
    if not y > 0:
        raise NonPositiveOutputError(f"ZLB steady state has non-positive output y={y:.6g}")
    return State(y, pi)


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    v = v / np.hypot(v[0], v[1])
    if v[0] < 0 or (v[0] == 0 and v[1] < 0):
        v = -v
    return v


def _eigvec(m: np.ndarray, mu: float) -> np.ndarray:
    a, b = m[0]
    c, d = m[1]
    # null vector of (M - mu I) from whichever row is better conditioned
    r1 = np.array([b, mu - a])
    r2 = np.array([mu - d, c])
    v = r1 if np.hypot(*r1) >= np.hypot(*r2) else r2
    return _unit(v)


def classify(L: LinearSystem) -> Classification:
    """Trace-determinant classification of a 2x2 linear system."""
    m = L.matrix
    if not np.all(np.isfinite(m)):
        raise InvalidParameterError("linear system has non-finite entries")
    tr = float(m[0, 0] + m[1, 1])
    det = float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    disc = tr * tr - 4.0 * det
    if abs(det) < DET_TOL:
        raise ClassificationBoundaryError(f"determinant {det:.3e} is numerically zero")
    if abs(disc) < DISC_TOL:
        raise RepeatedEigenvalueError(f"discriminant {disc:.3e} is numerically zero")
    if disc > 0:
        sq = math.sqrt(disc)
        # stable quadratic roots
        q = -0.5 * (tr + math.copysign(sq, tr)) if tr != 0 else -0.5 * sq
        mu_a = -q
        mu_b = det / mu_a
        mu1, mu2 = sorted((mu_a, mu_b))
        vecs = (_eigvec(m, mu1), _eigvec(m, mu2))
        eig = (complex(mu1), complex(mu2))
        if det < 0:
            kind = Kind.SADDLE
        elif abs(tr) < TRACE_TOL:
            raise ClassificationBoundaryError(f"trace {tr:.3e} is numerically zero")
        else:
            kind = Kind.NODAL_SOURCE if tr > 0 else Kind.NODAL_SINK
        return Classification(kind, tr, det, disc, eig, vecs)
    sq = cmath.sqrt(disc)
    eig = ((tr + sq) / 2, (tr - sq) / 2)
    if abs(tr) < TRACE_TOL:
        kind = Kind.CENTER
    else:
        kind = Kind.SPIRAL_SOURCE if tr > 0 else Kind.SPIRAL_SINK
    return Classification(kind, tr, det, disc, eig, None)


def invariant_lines(L: LinearSystem) -> InvariantLines:
    """Eigen-lines through the expansion point, split by eigenvalue sign."""
    c = classify(L)
    if c.eigenvectors is None:
        raise ComplexEigenvalueError(f"{c.kind.value} has no real invariant lines")
    stable, unstable = [], []
    for mu, v in zip(c.eigenvalues, c.eigenvectors):
        line = Line(L.point, v, mu.real)
        (stable if mu.real < 0 else unstable).append(line)
    return InvariantLines(stable, unstable)


def signed_distance(line: Line, q) -> float:
    """Perpendicular distance of `q` from `line`; positive when q lies above it
    (larger pi at the same x)."""
    v = line.direction
    return float(v[0] * (q[1] - line.point[1]) - v[1] * (q[0] - line.point[0]))


@dataclass(frozen=True)
class NullLine:
    """Locus pi = intercept + slope * (x - x_ref), or the vertical line x = x_ref.

    `intercept` is the value of pi at the natural level x_ref.
    """

    kind: str
    slope: float
    intercept: float
    x_ref: float
    vertical: bool = False
    degenerate: bool = False

    def pi_at(self, x):
        if self.vertical or self.degenerate:
            raise DegenerateSystemError(f"{self.kind} nullcline is not a graph over x")
        return self.intercept + self.slope * (np.asarray(x) - self.x_ref)


class Nullclines(NamedTuple):
    euler: NullLine
    phillips: NullLine

    def intersection(self) -> State:
        e, p = self.euler, self.phillips
        if e.vertical:
            return State(e.x_ref, float(p.pi_at(e.x_ref)))
        if e.degenerate or e.slope == p.slope:
            raise DegenerateSystemError("nullclines do not intersect in a single point")
        dx = (e.intercept - p.intercept) / (p.slope - e.slope)
        return State(p.x_ref + dx, float(p.intercept + p.slope * dx))


def nullclines(p: ModelParams, r: Regime, g: float = 0.0) -> Nullclines:
    """Euler (dx = 0) and Phillips (dpi = 0) loci of the scenario field."""
    r = Regime(r)
    f = scenario_field(p, r, g)
    xn = f.xr
    slope = -f.d1 / f.d2
    phillips = NullLine("phillips", slope + 0.0, -f.d0 / f.d2 + 0.0, xn)
    # Euler bracket: c0 + mu_w (x - xn) + c2 pi = 0
    if f.c2 == 0:
        if f.c1 == 0:
            euler = NullLine("euler", math.nan, math.nan, xn, degenerate=True)
        else:
            euler = NullLine("euler", math.inf, math.nan, xn - f.c0 / f.c1, vertical=True)
    else:
        euler = NullLine("euler", -f.c1 / f.c2, -f.c0 / f.c2, xn)
    return Nullclines(euler, phillips)


def phase_field(
    p: ModelParams,
    r: Regime,
    g: float = 0.0,
    x_range=(0.1, 1.5),
    pi_range=(-0.1, 0.1),
    nx: int = 21,
    npi: int = 21,
    linearized: bool | None = None,
) -> np.ndarray:
    """Velocity samples on a regular grid.

    Returns an array of shape (npi * nx, 4) with columns (x, pi, dx, dpi),
    row-major over pi then x.  `linearized` defaults to True for eta > 0.
    """
    nx, npi = int(nx), int(npi)
    if nx <= 0 or npi <= 0:
        return np.empty((0, 4))
    xs = np.linspace(x_range[0], x_range[1], nx)
    ps = np.linspace(pi_range[0], pi_range[1], npi)
    if linearized is None:
        linearized = p.eta > 0
    if not linearized and xs.min() <= 0:
        raise DomainError("phase-field grid touches x <= 0")
    X, PI = np.meshgrid(xs, ps)
    X, PI = X.ravel(), PI.ravel()
    if linearized or p.eta == 0:
        f = scenario_field(p, r, g) if linearized else scenario_field(p, r)
        dx, dpi = f(X, PI)
        dx = np.broadcast_to(dx, X.shape)
        dpi = np.broadcast_to(dpi, X.shape)
    else:
        vel = [field_baseline((x, q), p, r, g) for x, q in zip(X, PI)]
        dx = np.array([v.dx for v in vel])
        dpi = np.array([v.dpi for v in vel])
    return np.column_stack([X, PI, dx, dpi])


def phase_field_csv(samples: np.ndarray, dest=None) -> str:
    buf = io.StringIO()
    buf.write("x,pi,dx,dpi\n")
    for row in np.asarray(samples).tolist():
        buf.write(",".join(f"{v:.17g}" for v in row) + "\n")
    text = buf.getvalue()
    if dest is not None:
        with open(dest, "w", newline="") as fh:
            fh.write(text)
    return text


def nullclines_csv(nc: Nullclines, dest=None) -> str:
    buf = io.StringIO()
    buf.write("kind,slope,intercept\n")
    for line in nc:
        buf.write(f"{line.kind},{line.slope:.17g},{line.intercept:.17g}\n")
    text = buf.getvalue()
    if dest is not None:
        with open(dest, "w", newline="") as fh:
            fh.write(text)
    return text
