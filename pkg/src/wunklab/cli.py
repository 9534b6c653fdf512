"""Command-line front end.

Exit status: 0 on success, 2 for configuration errors, 3 for numerical
failures (a diagnostic JSON document is printed on stdout).
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from . import analysis, discrete, scenarios, statics
from .dynamics import Regime, jacobian
from .errors import ConfigError, DivergenceError, InvalidParameterError, PositivityBreach, WunkError
from .integrate import DEFAULT_STEP
from .model import ModelParams, check_wunk, params_from_dict

SCHEMA_VERSION = 1

_TOP_KEYS = {"schema_version", "params", "scenario", "numerics", "output", "sweep"}
_SCENARIO_KEYS = {"kind", "T", "delta", "g", "sigma_zlb", "sigma_normal", "mu_w_zlb", "mu_w_normal"}
_NUMERIC_KEYS = {
    "step", "tol", "grid", "nx", "npi", "x_range", "pi_range", "delta_max", "s", "h", "dt0", "halvings",
}
_OUTPUT_KEYS = {"directory", "formats"}
_SWEEP_KEYS = {"T", "delta", "g"}


@dataclass
class RunConfig:
    path: str
    params: ModelParams
    scenario: dict | None = None
    numerics: dict = dc_field(default_factory=dict)
    output: dict = dc_field(default_factory=dict)
    sweep: dict | None = None

    def num(self, key, default):
        return self.numerics.get(key, default)

    def scenario_obj(self, **override) -> scenarios.Scenario:
        if self.scenario is None:
            raise ConfigError(f"{self.path}: key 'scenario' is required for this command")
        doc = dict(self.scenario)
        doc.update(override)
        try:
            return scenarios.Scenario(**doc)
        except TypeError as exc:
            raise ConfigError(f"{self.path}: scenario: {exc}") from None

    def shock_kwargs(self) -> dict:
        sc = self.scenario or {}
        return {k: sc[k] for k in ("sigma_zlb", "sigma_normal", "mu_w_zlb", "mu_w_normal") if k in sc}


def _reject_unknown(doc, allowed, where, path):
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: '{where}' must be a JSON object")
    bad = sorted(set(doc) - allowed)
    if bad:
        raise ConfigError(f"{path}: unknown key(s) in {where}: {', '.join(bad)}")


def load_config(path) -> RunConfig:
    path = str(path)
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    _reject_unknown(doc, _TOP_KEYS, "config", path)
    if "schema_version" not in doc:
        raise ConfigError(f"{path}: missing key 'schema_version'")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise ConfigError(f"{path}: unsupported schema_version {doc['schema_version']!r}")
    if "params" not in doc:
        raise ConfigError(f"{path}: missing key 'params'")
    try:
        params = params_from_dict(doc["params"])
    except InvalidParameterError as exc:
        raise ConfigError(f"{path}: params: {exc}") from None
    scenario = doc.get("scenario")
    if scenario is not None:
        _reject_unknown(scenario, _SCENARIO_KEYS, "scenario", path)
    numerics = doc.get("numerics", {})
    _reject_unknown(numerics, _NUMERIC_KEYS, "numerics", path)
    for k, v in numerics.items():
        if k in ("x_range", "pi_range"):
            if not (isinstance(v, list) and len(v) == 2 and all(isinstance(e, (int, float)) for e in v)):
                raise ConfigError(f"{path}: numerics.{k} must be a two-element list")
        elif not isinstance(v, (int, float)) or isinstance(v, bool) or not v > 0:
            raise ConfigError(f"{path}: numerics.{k} must be a positive number")
    output = doc.get("output", {})
    _reject_unknown(output, _OUTPUT_KEYS, "output", path)
    sweep = doc.get("sweep")
    if sweep is not None:
        _reject_unknown(sweep, _SWEEP_KEYS, "sweep", path)
        for k, v in sweep.items():
            if not isinstance(v, list) or not v:
                raise ConfigError(f"{path}: sweep.{k} must be a non-empty list")
    return RunConfig(path, params, scenario, numerics, output, sweep)


def _outdir(args, cfg: RunConfig) -> Path | None:
    d = args.out or cfg.output.get("directory")
    if d is None:
        return None
    d = Path(d)
    try:
        d.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"output directory {d} not writable: {exc}") from None
    return d


def _emit_json(doc, outdir: Path | None, name: str):
    text = json.dumps(doc, indent=2)
    print(text)
    if outdir is not None:
        (outdir / name).write_text(text + "\n")


_PLOT_SCRIPT = '''"""Plot {csv} (written by wunklab). Requires matplotlib."""
import csv
import sys

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "{csv}"
with open(path) as fh:
    rows = list(csv.DictReader(fh))
t = [float(r["t"]) for r in rows]
fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True)
ax1.plot(t, [float(r["x"]) for r in rows])
ax1.set_ylabel("output")
ax2.plot(t, [float(r["pi"]) for r in rows])
ax2.set_ylabel("inflation")
ax2.set_xlabel("t (quarters)")
fig.savefig(path.rsplit(".", 1)[0] + ".png", dpi=150)
'''


def cmd_run(args, cfg):
    step = cfg.num("step", DEFAULT_STEP)
    tr = scenarios.run_scenario(cfg.params, cfg.scenario_obj(), step)
    out = _outdir(args, cfg) or Path(".")
    tr.to_csv(out / "trajectory.csv")
    if args.emit_plot_script:
        (out / "plot_trajectory.py").write_text(_PLOT_SCRIPT.format(csv="trajectory.csv"))
    print(json.dumps({"path": str(out / "trajectory.csv"), "samples": len(tr), "step": tr.step}))
    return 0


def _sweep_point(p, base, step, point):
    T, delta, g = point
    try:
        tr = scenarios.run_scenario(p, base.__class__(**{**base.to_dict(), "T": T, "delta": delta, "g": g}), step)
        return (T, delta, g, tr.x[0], tr.pi[0], "ok")
    except PositivityBreach as exc:
        return (T, delta, g, float("nan"), float("nan"), f"positivity_breach@{exc.t:.17g}")
    except DivergenceError as exc:
        return (T, delta, g, float("nan"), float("nan"), f"divergence@{exc.t:.17g}")


def cmd_sweep(args, cfg):
    base = cfg.scenario_obj()
    sw = cfg.sweep or {}
    grid = list(itertools.product(sw.get("T", [base.T]), sw.get("delta", [base.delta]), sw.get("g", [base.g])))
    for T, d, g in grid:  # validate every point before any work starts
        cfg.scenario_obj(T=T, delta=d, g=g)
    step = cfg.num("step", DEFAULT_STEP)
    cap = args.threads or int(os.environ.get("WUNKLAB_THREADS", "0") or 0) or (os.cpu_count() or 1)
    workers = max(1, min(cap, len(grid)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(lambda pt: _sweep_point(cfg.params, base, step, pt), grid))
    out = _outdir(args, cfg) or Path(".")
    lines = ["T,delta,g,x0,pi0,status"]
    for T, d, g, x0, p0, st in rows:
        lines.append(f"{float(T):.17g},{float(d):.17g},{float(g):.17g},{x0:.17g},{p0:.17g},{st}")
    (out / "sweep.csv").write_text("\n".join(lines) + "\n")
    print(json.dumps({"path": str(out / "sweep.csv"), "points": len(rows), "workers": workers}))
    return 0


def _regime_params(cfg: RunConfig, regime: Regime):
    # at zero rate use the ZLB-phase shocks, otherwise the base parameters
    if cfg.scenario is not None and regime.at_zero_rate:
        return scenarios.phase_params(cfg.params, cfg.scenario_obj(), "zlb")
    return cfg.params


def cmd_classify(args, cfg):
    r = Regime(args.regime)
    p = _regime_params(cfg, r)
    z = analysis.steady_state(p, r, args.g)
    c = analysis.classify(jacobian(p, r, z, args.g))
    doc = {
        "regime": r.value,
        "steady_state": {"x": z.x, "pi": z.pi},
        "kind": c.kind.value,
        "trace": c.trace,
        "det": c.det,
        "discriminant": c.discriminant,
        "eigenvalues": [[e.real, e.imag] for e in c.eigenvalues],
        "eigenvectors": None if c.eigenvectors is None else [v.tolist() for v in c.eigenvectors],
    }
    _emit_json(doc, _outdir(args, cfg), "classification.json")
    return 0


def cmd_nullclines(args, cfg):
    r = Regime(args.regime)
    nc = analysis.nullclines(_regime_params(cfg, r), r, args.g)
    out = _outdir(args, cfg) or Path(".")
    analysis.nullclines_csv(nc, out / "nullclines.csv")
    print(json.dumps({"path": str(out / "nullclines.csv")}))
    return 0


def cmd_phase_field(args, cfg):
    r = Regime(args.regime)
    arr = analysis.phase_field(
        _regime_params(cfg, r), r, args.g,
        x_range=tuple(cfg.num("x_range", (0.1, 1.5))),
        pi_range=tuple(cfg.num("pi_range", (-0.1, 0.1))),
        nx=int(cfg.num("nx", 21)), npi=int(cfg.num("npi", 21)),
    )
    out = _outdir(args, cfg) or Path(".")
    analysis.phase_field_csv(arr, out / "phase_field.csv")
    print(json.dumps({"path": str(out / "phase_field.csv"), "samples": len(arr)}))
    return 0


def cmd_thresholds(args, cfg):
    p, kw = cfg.params, cfg.shock_kwargs()
    tol = cfg.num("tol", None)
    if args.which == "guidance":
        rep = scenarios.guidance_threshold_nk(
            p, kw.get("sigma_zlb"), tol or 1e-8, sigma_normal=kw.get("sigma_normal"),
            step=cfg.num("step", DEFAULT_STEP),
        )
    elif args.which == "spending":
        rep = scenarios.spending_threshold_nk(p, kw.get("sigma_zlb"), tol or 1e-8)
    else:
        rep = scenarios.zlb_threshold_wunk(
            p, kw.get("sigma_zlb"), cfg.num("delta_max", None), int(cfg.num("grid", 41)), tol or 1e-6,
            sigma_normal=kw.get("sigma_normal"), mu_w_zlb=kw.get("mu_w_zlb"),
            mu_w_normal=kw.get("mu_w_normal"), step=cfg.num("step", 1e-2),
        )
    doc = {"threshold": args.which, **rep.to_dict()}
    _emit_json(doc, _outdir(args, cfg), f"threshold_{args.which}.json")
    return 0


def cmd_statics(args, cfg):
    shocks = list(statics.SHOCKS) if args.shock == "all" else [args.shock]
    if args.shock == "all" and cfg.params.eta == 0:
        shocks.remove("g")
    h = cfg.num("h", statics.FD_REL_STEP)
    reps = [statics.comparative_static(cfg.params, s, h, args.g).to_dict() for s in shocks]
    _emit_json(reps if args.shock == "all" else reps[0], _outdir(args, cfg), "statics.json")
    return 0


def cmd_check_wunk(args, cfg):
    rep = check_wunk(cfg.params)
    doc = {"holds": rep.holds, "lhs": rep.lhs, "rhs": rep.rhs, "delta_bound": rep.delta_bound_ok}
    _emit_json(doc, _outdir(args, cfg), "check_wunk.json")
    return 0


def cmd_discrete_check(args, cfg):
    p = cfg.params
    alpha, coeff = discrete.loglin_coeffs(p)
    conv = discrete.dt_convergence(p, cfg.num("dt0", 0.1), int(cfg.num("halvings", 5)))
    doc = {
        "alpha": alpha,
        "phillips_coeff": coeff,
        "dt_halving": [{"dt": dt, "error": e, "ratio": None if r != r else r} for dt, e, r in conv],
    }
    _emit_json(doc, _outdir(args, cfg), "discrete_check.json")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wunklab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", required=True, help="JSON run configuration")
        sp.add_argument("--out", help="output directory (overrides output.directory)")
        sp.set_defaults(func=func)
        return sp

    sp = add("run", cmd_run, "integrate the configured scenario")
    sp.add_argument("--emit-plot-script", action="store_true", help="also write a matplotlib script")
    sp = add("sweep", cmd_sweep, "run the scenario over the sweep grid")
    sp.add_argument("--threads", type=int, default=None, help="worker cap (default: WUNKLAB_THREADS or CPU count)")
    for name, func, help_ in (
        ("classify", cmd_classify, "classify the steady state of a regime"),
        ("nullclines", cmd_nullclines, "write Euler and Phillips nullclines"),
        ("phase-field", cmd_phase_field, "sample the vector field on a grid"),
    ):
        sp = add(name, func, help_)
        sp.add_argument("--regime", default="ZLB", choices=[r.value for r in Regime])
        sp.add_argument("--g", type=float, default=0.0, help="government spending")
    sp = add("thresholds", cmd_thresholds, "compute Delta*, g* or T*")
    sp.add_argument("--which", choices=["guidance", "spending", "zlb"], required=True)
    sp = add("statics", cmd_statics, "comparative statics at the permanent ZLB")
    sp.add_argument("--shock", default="all", choices=["all", *statics.SHOCKS])
    sp.add_argument("--g", type=float, default=0.0)
    add("check-wunk", cmd_check_wunk, "test the WUNK condition")
    add("discrete-check", cmd_discrete_check, "discrete-model coefficients and dt convergence")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        return args.func(args, cfg)
    except ConfigError as exc:
        print(f"wunklab: config error: {exc}", file=sys.stderr)
        return 2
    except InvalidParameterError as exc:
        print(f"wunklab: config error: {args.config}: {exc}", file=sys.stderr)
        return 2
    except WunkError as exc:
        diag = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, PositivityBreach):
            diag.update(t=exc.t, x=exc.x, pi=exc.pi)
        elif isinstance(exc, DivergenceError):
            diag.update(t=exc.t)
        print(json.dumps(diag, indent=2))
        return 3


def run_cli(argv) -> int:
    return main(argv)


if __name__ == "__main__":
    sys.exit(main())
