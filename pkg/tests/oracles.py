"""Independent reference computations used to check the library.

Nothing here calls the closed forms under test: steady states come from a
generic root finder on a hand-written field, Jacobians from central
differences, linear solutions from the eigen-decomposition, and nonlinear
paths from an adaptive high-order integrator.
"""

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import root


def raw_field(p, regime, x, pi, g=0.0):
    """Euler-Phillips field typed in from the model equations (eta = 0)."""
    y_n = (p.epsilon - 1) / p.epsilon * p.a / p.kappa
    r_n = p.delta - p.sigma - p.mu_w * y_n
    if regime == "NormalRule":
        i = r_n + p.phi * pi
    else:
        i = 0.0
    dy = x * (i - pi - r_n + p.mu_w * (x - y_n))
    dpi = p.delta * pi - p.epsilon * p.kappa / (p.gamma * p.a) * (x - y_n)
    return np.array([dy, dpi])


def raw_linear_gov_field(p, regime, c, pi, g):
    """Linearized spending model typed in from the model equations."""
    m = (p.epsilon - 1) / p.epsilon
    c_n = m ** (1 / (1 + p.eta)) * p.a / p.kappa
    r_n = p.delta - p.sigma - p.mu_w * c_n
    i = r_n + p.phi * pi if regime == "NormalRule" else 0.0
    dc = c_n * (i - pi - r_n + p.mu_w * (c - c_n))
    gain = p.epsilon * p.kappa / (p.gamma * p.a) * m ** (p.eta / (1 + p.eta))
    dpi = p.delta * pi - gain * ((1 + p.eta) * (c - c_n) + p.eta * g)
    return np.array([dc, dpi])


def root_steady_state(fun, guess):
    sol = root(lambda z: fun(z[0], z[1]), guess, method="hybr", tol=1e-13)
    assert np.max(np.abs(fun(*sol.x))) < 1e-13, sol.message
    return sol.x


def fd_jacobian(fun, z, h=1e-6):
    z = np.asarray(z, dtype=float)
    J = np.zeros((2, 2))
    for j in range(2):
        step = h * max(1.0, abs(z[j]))
        e = np.zeros(2)
        e[j] = step
        J[:, j] = (np.asarray(fun(*(z + e))) - np.asarray(fun(*(z - e)))) / (2 * step)
    return J


def linear_solution(M, z_end, t_end, t):
    """State at time t of dz/dt = M z that passes through z_end at t_end."""
    mu, V = np.linalg.eig(np.asarray(M, dtype=float))
    coef = np.linalg.solve(V, np.asarray(z_end, dtype=complex))
    return np.real(V @ (coef * np.exp(mu * (t - t_end))))


def ivp_backward(fun, z_end, span, rtol=1e-12, atol=1e-14):
    """Integrate the time-reversed field over `span`; returns the state at t = 0."""
    sol = solve_ivp(lambda t, z: -np.asarray(fun(z[0], z[1])), (0.0, span), z_end,
                    method="DOP853", rtol=rtol, atol=atol)
    assert sol.success
    return sol.y[:, -1]
