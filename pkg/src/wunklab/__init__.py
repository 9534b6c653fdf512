"""Continuous-time New Keynesian model with wealth in the utility function."""

from ._backend import BACKEND
from .errors import *  # noqa: F401,F403
from .model import P0, Derived, ModelParams, check_wunk, derive, load_params, params_from_dict
from .dynamics import Regime, State, Velocity, jacobian
from .integrate import Trajectory, integrate_backward, integrate_forward

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "P0",
    "Derived",
    "ModelParams",
    "Regime",
    "State",
    "Trajectory",
    "Velocity",
    "check_wunk",
    "derive",
    "integrate_backward",
    "integrate_forward",
    "jacobian",
    "load_params",
    "params_from_dict",
]
