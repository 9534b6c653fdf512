"""Exception hierarchy."""


class WunkError(Exception):
    """Base class for all wunklab errors."""


class InvalidParameterError(WunkError, ValueError):
    """A parameter record or scenario violates one of its invariants."""


class DomainError(WunkError, ValueError):
    """A state lies outside the domain of a vector field (e.g. x <= 0)."""


class NotSteadyStateError(WunkError):
    def __init__(self, residual, message=None):
        self.residual = residual
        super().__init__(message or f"expansion point is not a steady state (residual norm {residual:.3e})")


class NonPositiveOutputError(WunkError):
    """Closed-form steady state has non-positive output or consumption."""


class DegenerateSystemError(WunkError):
    """Denominator vanishes (boundary between the NK and WUNK regions)."""


class ClassificationBoundaryError(WunkError):
    """Linear system sits on a boundary of the trace-determinant plane."""


class RepeatedEigenvalueError(ClassificationBoundaryError):
    pass


class ComplexEigenvalueError(WunkError):
    """Invariant lines were requested for a spiral or a center."""


class PositivityBreach(WunkError):
    """Integration produced x <= x_min."""

    def __init__(self, t, x, pi):
        self.t = t
        self.x = x
        self.pi = pi
        super().__init__(f"positivity breach at t={t:.6g} (x={x:.6g}, pi={pi:.6g})")


class BracketError(WunkError):
    """Root-finding bracket does not contain a sign change."""


class InfiniteLimitError(WunkError):
    """Multiplier limit is infinite (NK parameters)."""


class ConfigError(WunkError):
    """Malformed or invalid run configuration."""


class DivergenceError(WunkError):
    """Integration produced a non-finite state (finite-time blow-up)."""

    def __init__(self, t):
        self.t = t
        super().__init__(f"trajectory diverged near t={t:.6g}")
