"""Acceptance suite: one test per criterion, each reporting PASS/FAIL in the
terminal summary.  Tolerances are the stated ones; nothing is relaxed."""

import time
import timeit

import numpy as np
import pytest

from wunklab.analysis import Kind, classify, invariant_lines, steady_state
from wunklab.discrete import DiscretePath, dt_convergence, forward_solve_output, loglin_coeffs
from wunklab.dynamics import Regime, jacobian, scenario_field
from wunklab.errors import InfiniteLimitError, PositivityBreach
from wunklab.model import P0, check_wunk, check_wunk_statistics, derive
from wunklab.scenarios import (
    Scenario, guidance_threshold_nk, multiplier, multiplier_limit, phase_params, run_scenario,
    spending_threshold_nk, zlb_threshold_wunk,
)
from wunklab.statics import comparative_static

from .conftest import draw_nk, draw_wunk
from .oracles import fd_jacobian

NK = P0.replace(mu_w=0.0)
GOV = P0.replace(eta=1.0, mu_w=0.35)
Y_N = 5 / 6


def _report(failures):
    assert not failures, "\n".join(failures)


@pytest.mark.criterion(1, "calibration reproduction")
def test_criterion_1_calibration():
    fails = []
    r = check_wunk_statistics(0.108, 0.005, 0.004)
    if not (r.holds and abs(r.lhs - 0.103) <= 5e-4 and abs(r.rhs - 0.037) <= 5e-4):
        fails.append(f"quarterly case: {r}")
    r = check_wunk_statistics(0.0675, 0.005, 0.004)
    if not (r.holds and abs(r.lhs - 0.0625) <= 5e-4 and abs(r.rhs - 0.0593) <= 5e-4):
        fails.append(f"27% case: {r}")
    n = 2000
    per_call = timeit.timeit(lambda: check_wunk_statistics(0.108, 0.005, 0.004), number=n) / n
    t0 = time.perf_counter()
    check_wunk_statistics(0.0675, 0.005, 0.004)
    single = time.perf_counter() - t0
    if not (per_call < 1e-3 and single < 1e-3):
        fails.append(f"runtime {per_call:.2e}s per call, single {single:.2e}s")
    _report(fails)


@pytest.mark.criterion(2, "classification table over random draws")
def test_criterion_2_classification_table():
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    fails = []
    cells = [
        ("NK", "NormalRule", "active", "source"),
        ("NK", "NormalRule", "passive", "saddle"),
        ("NK", "ZLB", "any", "saddle"),
        ("WUNK", "NormalRule", "active", "source"),
        ("WUNK", "NormalRule", "passive", "source"),
        ("WUNK", "ZLB", "any", "nodal source"),
    ]
    for model, regime, rule, want in cells:
        bad = 0
        for _ in range(500):
            phi = {"active": rng.uniform(1.01, 3), "passive": rng.uniform(0, 0.99), "any": rng.uniform(0, 3)}[rule]
            maker = draw_nk if model == "NK" else draw_wunk
            p = maker(rng, zlb=regime == "ZLB", phi=phi)
            c = classify(jacobian(p, regime, steady_state(p, regime)))
            ok = {
                "source": c.kind.is_source,
                "saddle": c.kind is Kind.SADDLE,
                "nodal source": c.kind is Kind.NODAL_SOURCE and c.discriminant > 0,
            }[want]
            bad += not ok
        if bad:
            fails.append(f"{model}/{regime}/{rule}: {bad} of 500 draws not {want}")
    elapsed = time.perf_counter() - t0
    if elapsed >= 5:
        fails.append(f"runtime {elapsed:.2f}s")
    _report(fails)


@pytest.mark.criterion(3, "ZLB episode convergence and NK collapse")
def test_criterion_3_zlb_convergence():
    t0 = time.perf_counter()
    fails = []
    Ts = (4, 8, 16, 32, 64)
    z = steady_state(P0, Regime.ZLB)
    s0 = [run_scenario(P0, Scenario("ZlbEpisode", T)).initial for T in Ts]
    if not all(a.x > b.x for a, b in zip(s0, s0[1:])):
        fails.append("WUNK y(0) not strictly decreasing in T")
    if not all(a.pi > b.pi for a, b in zip(s0, s0[1:])):
        fails.append("WUNK pi(0) not strictly decreasing in T")
    dy, dpi = abs(s0[-1].x - z.x), abs(s0[-1].pi - z.pi)
    if not dy < 1e-3:
        fails.append(f"WUNK |y(0;64) - y^z| = {dy:.4g} (y(0;64)={s0[-1].x:.6f}, y^z={z.x:.6f}), needs < 1e-3")
    if not dpi < 1e-4:
        fails.append(f"WUNK |pi(0;64) - pi^z| = {dpi:.4g} (pi(0;64)={s0[-1].pi:.6f}, pi^z={z.pi:.6f}), needs < 1e-4")
    ys = []
    aborted = False
    for T in Ts:
        try:
            ys.append(run_scenario(NK, Scenario("ZlbEpisode", T, sigma_zlb=0.13)).x[0])
        except PositivityBreach:
            aborted = True
            break
    if not all(a > b for a, b in zip(ys, ys[1:])):
        fails.append("NK y(0;T) not strictly decreasing")
    y32 = ys[Ts.index(32)] if len(ys) > 3 else None
    if not (aborted or (y32 is not None and y32 < 0.5 * Y_N)):
        fails.append(f"NK y(0;32) = {y32} not below half of natural output")
    elapsed = time.perf_counter() - t0
    if elapsed >= 10:
        fails.append(f"runtime {elapsed:.2f}s")
    _report(fails)


@pytest.mark.criterion(4, "forward-guidance thresholds")
def test_criterion_4_guidance_thresholds():
    t0 = time.perf_counter()
    fails = []
    rep = guidance_threshold_nk(NK, sigma_zlb=0.13, tol=1e-8)
    if not rep.residual < 1e-8:
        fails.append(f"Delta* residual {rep.residual:.3e}")
    ds = rep.value
    boom = {T: run_scenario(NK, Scenario("ForwardGuidance", T, ds + 0.5, sigma_zlb=0.13)).initial for T in (8, 32)}
    slump = {T: run_scenario(NK, Scenario("ForwardGuidance", T, ds - 0.5, sigma_zlb=0.13)).initial for T in (8, 32)}
    # above the threshold: boom for every duration, growing with T
    for T, s in boom.items():
        if not (s.x > Y_N and s.pi > 0):
            fails.append(f"Delta*+0.5, T={T}: no boom ({s})")
    if not (boom[32].x > boom[8].x and boom[32].pi > boom[8].pi):
        fails.append("Delta*+0.5: boom does not deepen with T")
    # below the threshold: output and inflation at 0 fall with T, ending in a slump
    if not (slump[32].x < slump[8].x and slump[32].pi < slump[8].pi):
        fails.append("Delta*-0.5: y(0), pi(0) do not fall with T")
    if not (slump[32].x < Y_N and slump[32].pi < 0):
        fails.append(f"Delta*-0.5, T=32: no slump ({slump[32]})")

    kw = dict(mu_w_normal=0.12)
    tstar = zlb_threshold_wunk(P0, **kw)
    sc = Scenario("ForwardGuidance", 1.0, 0.0, **kw)
    zf = steady_state(phase_params(P0, sc, "normal"), Regime.PEG)
    T = tstar.value + 1
    for d in tstar.extra["deltas"]:
        tr = run_scenario(P0, Scenario("ForwardGuidance", T, d, **kw), 1e-2)
        s = tr.initial
        if not (s.pi < 0 and s.x < Y_N):
            fails.append(f"T*+1, Delta={d:.2f}: pi(0)={s.pi:.3g}, y(0)={s.x:.4f}")
        if not (np.all(tr.x < zf.x) and np.all(tr.pi < zf.pi)):
            fails.append(f"T*+1, Delta={d:.2f}: path exceeds the guidance steady state")
    elapsed = time.perf_counter() - t0
    if elapsed >= 60:
        fails.append(f"runtime {elapsed:.2f}s")
    _report(fails)


@pytest.mark.criterion(5, "spending multiplier limit and threshold")
def test_criterion_5_multiplier():
    t0 = time.perf_counter()
    fails = []
    lim = multiplier_limit(GOV)
    if not abs(lim - 1.689345) <= 1e-6:
        fails.append(f"limit {lim}")
    m = multiplier(GOV, 200, 0.01, 0.002)
    if not abs(m - lim) <= 1e-3:
        fails.append(f"dynamic multiplier {m} vs limit {lim}")
    small = multiplier_limit(GOV.replace(eta=1e-6))
    if not abs(small - 1) <= 1e-3:
        fails.append(f"eta=1e-6 limit {small}")
    try:
        multiplier_limit(NK.replace(eta=1.0))
        fails.append("NK parameters did not raise the infinite-limit signal")
    except InfiniteLimitError:
        pass
    p = NK.replace(eta=1.0)
    rep = spending_threshold_nk(p, sigma_zlb=0.13, tol=1e-8)
    if not rep.residual < 1e-8:
        fails.append(f"g* residual {rep.residual:.3e}")
    Ts = (8, 16, 32, 64)
    up = [run_scenario(p, Scenario("GovSpending", T, g=1.1 * rep.value, sigma_zlb=0.13)).x[0] for T in Ts]
    dn = [run_scenario(p, Scenario("GovSpending", T, g=0.9 * rep.value, sigma_zlb=0.13)).x[0] for T in Ts]
    if not all(a < b for a, b in zip(up, up[1:])):
        fails.append(f"1.1 g*: c(0) not growing with T {up}")
    if not all(a > b for a, b in zip(dn, dn[1:])):
        fails.append(f"0.9 g*: c(0) not falling with T {dn}")
    elapsed = time.perf_counter() - t0
    if elapsed >= 30:
        fails.append(f"runtime {elapsed:.2f}s")
    _report(fails)


def _rel_ok(a, b, rtol):
    a, b = np.asarray(a), np.asarray(b)
    return np.all(np.abs(a - b) <= rtol * np.abs(a))


@pytest.mark.criterion(6, "paradoxes of thrift, toil, flexibility; multiplier above one")
def test_criterion_6_paradoxes():
    t0 = time.perf_counter()
    rng = np.random.default_rng(6)
    fails = []
    draws = [P0] + [draw_wunk(rng, zlb=True) for _ in range(50)]
    for k, p in enumerate(draws):
        for shock in ("mu_w", "kappa", "a", "gamma"):
            r = comparative_static(p, shock)
            if r.verdict != "holds":
                fails.append(f"draw {k} {shock}: {r.verdict} {r.analytic}")
            if not _rel_ok(r.analytic, r.finite_difference, 1e-6):
                fails.append(f"draw {k} {shock}: analytic {r.analytic} vs fd {r.finite_difference}")
    gov_draws = [GOV]
    while len(gov_draws) < 20:
        p = draw_wunk(rng, zlb=True).replace(eta=rng.uniform(0.1, 3))
        if check_wunk(p).holds and derive(p).r_n < 0:
            gov_draws.append(p)
    for k, p in enumerate(gov_draws):
        r = comparative_static(p, "g")
        if r.verdict != "holds" or not abs(r.output_derivative - multiplier_limit(p)) <= 1e-9:
            fails.append(f"spending draw {k}: dy/dg={r.output_derivative} limit={multiplier_limit(p)}")
        if not _rel_ok(r.analytic, r.finite_difference, 1e-6):
            fails.append(f"spending draw {k}: analytic {r.analytic} vs fd {r.finite_difference}")
    elapsed = time.perf_counter() - t0
    if elapsed >= 5:
        fails.append(f"runtime {elapsed:.2f}s")
    _report(fails)


@pytest.mark.criterion(7, "numerical hygiene")
def test_criterion_7_hygiene():
    rng = np.random.default_rng(7)
    fails = []
    worst_j, worst_ss, worst_eig = 0.0, 0.0, 0.0
    for k in range(100):
        p = (draw_wunk if k % 2 else draw_nk)(rng, zlb=True)
        if k % 5 == 0:
            p = p.replace(eta=rng.uniform(0.1, 2))
        for regime in (Regime.NORMAL, Regime.ZLB):
            z = steady_state(p, regime)
            f = scenario_field(p, regime)
            worst_ss = max(worst_ss, *np.abs(f(z.x, z.pi)))
            L = jacobian(p, regime, z)
            J = L.matrix
            F = fd_jacobian(lambda x, pi: f(x, pi), z)
            worst_j = max(worst_j, np.max(np.abs(J - F)) / np.max(np.abs(J)))
            c = classify(L)
            if c.eigenvectors is not None:
                for mu, v in zip(c.eigenvalues, c.eigenvectors):
                    worst_eig = max(worst_eig, np.linalg.norm(J @ v - mu.real * v))
    if not worst_j < 1e-5:
        fails.append(f"Jacobian vs finite differences: rel err {worst_j:.3e}")
    if not worst_ss <= 1e-12:
        fails.append(f"steady-state field residual {worst_ss:.3e}")
    if not worst_eig < 1e-10:
        fails.append(f"eigen residual {worst_eig:.3e}")
    sc = Scenario("GovSpending", 40.0, g=0.01)
    y = [run_scenario(GOV, sc, h).x[0] for h in (1.0, 0.5, 0.25)]
    ratio = (y[0] - y[1]) / (y[1] - y[2])
    if not 16 * 0.8 <= ratio <= 16 * 1.2:
        fails.append(f"Richardson ratio {ratio:.3f}")
    _report(fails)


@pytest.mark.criterion(8, "discrete model")
def test_criterion_8_discrete():
    fails = []
    if loglin_coeffs(NK)[0] != 1.0:
        fails.append("alpha != 1 without wealth in utility")
    alpha, coeff = loglin_coeffs(P0)
    if alpha != 0.99 / (0.99 + 0.125) or abs(alpha - 0.887892) > 5e-7 or coeff != 0.01:
        fails.append(f"alpha {alpha!r}, coeff {coeff!r}")
    K = 40
    for k in range(K + 1):
        pi = np.zeros(K + 1)
        pi[k] = 1.0
        y0 = forward_solve_output(DiscretePath(np.zeros(K + 1), pi), P0, 0.0).y0
        want = alpha ** (k + 1)
        if abs(y0 - want) > 4 * np.finfo(float).eps * want:
            fails.append(f"horizon {k}: {y0!r} vs alpha^(k+1) {want!r}")
    rows = dt_convergence(P0, 0.1, 5)
    ratios = [r for _, _, r in rows[1:]]
    if not all(3.6 < r < 4.4 for r in ratios):
        fails.append(f"dt-halving ratios {ratios}")
    _report(fails)
