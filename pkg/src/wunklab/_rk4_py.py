"""Pure-Python fallback for the compiled RK4 kernel (same operation order)."""

import numpy as np


def rk4_path(coeffs, x0, pi0, h, n, sign, x_min):
    w0, w1, c0, c1, c2, xr, d0, d1, d2 = (float(v) for v in coeffs)
    xs = np.zeros(n + 1)
    ps = np.zeros(n + 1)
    x, p = float(x0), float(pi0)
    xs[0] = x
    ps[0] = p
    guard = x_min == x_min
    if guard and x <= x_min:
        return xs, ps, 0
    sh = sign * h
    half = 0.5 * sh
    xl = [x]
    pl = [p]
    breach = -1
    for i in range(n):
        k1x = (w0 + w1 * x) * (c0 + c1 * (x - xr) + c2 * p)
        k1p = d0 + d1 * (x - xr) + d2 * p
        xa, pa = x + half * k1x, p + half * k1p
        k2x = (w0 + w1 * xa) * (c0 + c1 * (xa - xr) + c2 * pa)
        k2p = d0 + d1 * (xa - xr) + d2 * pa
        xa, pa = x + half * k2x, p + half * k2p
        k3x = (w0 + w1 * xa) * (c0 + c1 * (xa - xr) + c2 * pa)
        k3p = d0 + d1 * (xa - xr) + d2 * pa
        xa, pa = x + sh * k3x, p + sh * k3p
        k4x = (w0 + w1 * xa) * (c0 + c1 * (xa - xr) + c2 * pa)
        k4p = d0 + d1 * (xa - xr) + d2 * pa
        x = x + sh * (k1x + 2.0 * k2x + 2.0 * k3x + k4x) / 6.0
        p = p + sh * (k1p + 2.0 * k2p + 2.0 * k3p + k4p) / 6.0
        xl.append(x)
        pl.append(p)
        if guard and x <= x_min:
            breach = i + 1
            break
    m = len(xl)
    xs[:m] = xl
    ps[:m] = pl
    return xs, ps, breach
