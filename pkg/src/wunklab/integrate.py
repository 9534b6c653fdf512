"""Fixed-step RK4 integration of terminal-condition problems."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field as dc_field
from typing import Callable, Iterator, Union

import numpy as np

from . import _backend
from .dynamics import QuadField, State
from .errors import DivergenceError, InvalidParameterError, PositivityBreach

__all__ = ["Trajectory", "integrate_backward", "integrate_forward", "concatenate", "X_MIN", "DEFAULT_STEP"]

X_MIN = 1e-9
DEFAULT_STEP = 1e-3

FieldLike = Union[QuadField, Callable[[float, float], tuple]]


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Time-sampled path in forward-time order."""

    t: np.ndarray
    x: np.ndarray
    pi: np.ndarray
    regime: np.ndarray
    step: float
    segments: tuple = dc_field(default=())

    def __len__(self):
        return len(self.t)

    @property
    def initial(self) -> State:
        return State(float(self.x[0]), float(self.pi[0]))

    @property
    def terminal(self) -> State:
        return State(float(self.x[-1]), float(self.pi[-1]))

    def samples(self) -> Iterator[tuple]:
        for t, x, p, r in zip(self.t, self.x, self.pi, self.regime):
            yield float(t), State(float(x), float(p)), str(r)

    def to_csv(self, dest=None) -> str:
        """Write ``t,x,pi,regime`` with 17 significant digits; returns the text."""
        buf = io.StringIO()
        buf.write("t,x,pi,regime\n")
        for t, x, p, r in zip(self.t.tolist(), self.x.tolist(), self.pi.tolist(), self.regime.tolist()):
            buf.write(f"{t:.17g},{x:.17g},{p:.17g},{r}\n")
        text = buf.getvalue()
        if dest is not None:
            with open(dest, "w", newline="") as fh:
                fh.write(text)
        return text


def _steps(span: float, step: float) -> tuple:
    if not step > 0:
        raise InvalidParameterError(f"step must be positive, got {step!r}")
    if span < 0:
        raise InvalidParameterError(f"integration span must be >= 0, got {span!r}")
    if span == 0:
        return 0, step
    n = max(1, int(math.ceil(span / step * (1 - 1e-12))))
    return n, span / n


def _python_rk4(f, x0, p0, h, n, sign, x_min):
    xs = np.zeros(n + 1)
    ps = np.zeros(n + 1)
    x, p = x0, p0
    xs[0], ps[0] = x, p
    guard = x_min == x_min
    if guard and x <= x_min:
        return xs, ps, 0
    sh = sign * h
    for i in range(n):
        k1 = f(x, p)
        k2 = f(x + 0.5 * sh * k1[0], p + 0.5 * sh * k1[1])
        k3 = f(x + 0.5 * sh * k2[0], p + 0.5 * sh * k2[1])
        k4 = f(x + sh * k3[0], p + sh * k3[1])
        x = x + sh * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]) / 6.0
        p = p + sh * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]) / 6.0
        xs[i + 1], ps[i + 1] = x, p
        if guard and x <= x_min:
            return xs, ps, i + 1
    return xs, ps, -1


def _run(field, x0, p0, h, n, sign, x_min, backend):
    xm = float("nan") if x_min is None else float(x_min)
    if isinstance(field, QuadField):
        kern = _backend.get_kernel(backend)
        return kern.rk4_path(field.coeffs(), float(x0), float(p0), float(h), int(n), float(sign), xm)
    return _python_rk4(field, float(x0), float(p0), float(h), int(n), float(sign), xm)


def _check_finite(xs, ps, t_of):
    bad = ~(np.isfinite(xs) & np.isfinite(ps))
    if bad.any():
        raise DivergenceError(t_of(int(np.argmax(bad))))


def _regime_tag(field, regime):
    if regime is not None:
        return str(getattr(regime, "value", regime))
    r = getattr(field, "regime", None)
    return str(getattr(r, "value", r)) if r is not None else ""


def integrate_backward(
    field: FieldLike,
    terminal: State,
    t_end: float,
    step: float = DEFAULT_STEP,
    *,
    t_start: float = 0.0,
    x_min: float | None = X_MIN,
    regime=None,
    backend: str | None = None,
) -> Trajectory:
    """Integrate the time-reversed field from `terminal` at `t_end` down to `t_start`.

    The step is shrunk so that an integer number of steps covers the span
    exactly; the final sample is `terminal` bit for bit.  ``x_min=None``
    disables the positivity guard.

    Raises
    ------
    PositivityBreach
        if x falls to `x_min` or below; carries the breach time.
    DivergenceError
        if the state stops being finite.
    """
    n, h = _steps(t_end - t_start, step)
    xs, ps, breach = _run(field, terminal[0], terminal[1], h, n, -1.0, x_min, backend)
    if breach >= 0:
        raise PositivityBreach(t_end - breach * h, float(xs[breach]), float(ps[breach]))
    _check_finite(xs, ps, lambda i: t_end - i * h)
    span = t_end - t_start
    t = t_start + span * (np.arange(n + 1) / max(n, 1))
    t[0] = t_start
    t[-1] = t_end
    tag = _regime_tag(field, regime)
    return Trajectory(
        t=t, x=xs[::-1].copy(), pi=ps[::-1].copy(),
        regime=np.full(n + 1, tag), step=h,
    )


def integrate_forward(
    field: FieldLike,
    initial: State,
    t_end: float,
    step: float = DEFAULT_STEP,
    *,
    t_start: float = 0.0,
    x_min: float | None = X_MIN,
    regime=None,
    backend: str | None = None,
) -> Trajectory:
    n, h = _steps(t_end - t_start, step)
    xs, ps, breach = _run(field, initial[0], initial[1], h, n, 1.0, x_min, backend)
    if breach >= 0:
        raise PositivityBreach(t_start + breach * h, float(xs[breach]), float(ps[breach]))
    _check_finite(xs, ps, lambda i: t_start + i * h)
    t = t_start + (t_end - t_start) * (np.arange(n + 1) / max(n, 1))
    t[0] = t_start
    t[-1] = t_end
    return Trajectory(t=t, x=xs, pi=ps, regime=np.full(n + 1, _regime_tag(field, regime)), step=h)


def concatenate(first: Trajectory, second: Trajectory) -> Trajectory:
    """Join two segments sharing a sample (last of `first` == first of `second`).

    The join sample is kept once, with the tag of `first`.
    """
    if first.t[-1] != second.t[0] or first.x[-1] != second.x[0] or first.pi[-1] != second.pi[0]:
        raise ValueError("segments do not share their join sample")
    return Trajectory(
        t=np.concatenate([first.t, second.t[1:]]),
        x=np.concatenate([first.x, second.x[1:]]),
        pi=np.concatenate([first.pi, second.pi[1:]]),
        regime=np.concatenate([first.regime, second.regime[1:]]),
        step=min(first.step, second.step),
        segments=(first, second),
    )
