import math

import numpy as np
import pytest

from wunklab.model import P0, ModelParams

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    crit = getattr(report, "criterion", None)
    if crit is None:
        return
    prev = _CRITERIA.get(crit[0], (crit[1], True))
    _CRITERIA[crit[0]] = (crit[1], prev[1] and report.outcome == "passed")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        rep.criterion = (m.args[0], m.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, ok = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}")


@pytest.fixture
def p0():
    return P0


@pytest.fixture
def p0_nk():
    return P0.replace(mu_w=0.0)


@pytest.fixture
def p0_gov():
    return P0.replace(eta=1.0, mu_w=0.35)


def draw_nk(rng, zlb=False, phi=None):
    delta = rng.uniform(0.01, 0.2)
    eps = rng.uniform(1.5, 20)
    kappa = rng.uniform(0.5, 2)
    gamma = rng.uniform(50, 5000)
    a = rng.uniform(0.5, 2)
    sigma = delta * rng.uniform(1.05, 3) if zlb else delta * rng.uniform(0, 0.9)
    phi = rng.uniform(0, 3) if phi is None else phi
    return ModelParams(delta=delta, sigma=sigma, epsilon=eps, kappa=kappa, gamma=gamma, a=a, mu_w=0.0, phi=phi)


def draw_wunk(rng, zlb=False, phi=None):
    """WUNK draw satisfying the strict condition and delta^2 > (eps-1)/gamma."""
    while True:
        delta = rng.uniform(0.02, 0.2)
        eps = rng.uniform(1.5, 20)
        kappa = rng.uniform(0.5, 2)
        a = rng.uniform(0.5, 2)
        gamma = (eps - 1) / delta**2 * rng.uniform(1.2, 10)
        y_n = (eps - 1) / eps * a / kappa
        s = eps * kappa / (delta * gamma * a)
        sigma = (delta - s * y_n) * rng.uniform(0, 0.8)
        rate_bound = (delta - sigma) / y_n  # mu_w above this makes r_n < 0
        if zlb:
            mu_w = max(s, rate_bound) * rng.uniform(1.05, 3)
        else:
            if rate_bound <= s * 1.02:
                continue
            mu_w = rng.uniform(s * 1.01, rate_bound * 0.99)
        phi = rng.uniform(0, 3) if phi is None else phi
        p = ModelParams(delta=delta, sigma=sigma, epsilon=eps, kappa=kappa, gamma=gamma, a=a, mu_w=mu_w, phi=phi)
        if math.isfinite(p.mu_w):
            return p


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
