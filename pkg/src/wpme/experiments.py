"""Experiment kinds, report assembly and the concurrent sweep runner.

``run(cfg, out_dir)`` executes one config and, when ``out_dir`` is given,
writes ``trajectory.csv``, ``report.json``, one two-column ``fit_*.dat`` file
per fitted curve and ``timing.json`` (wall-clock lives there so that the
report itself is byte-identical across reruns).
"""
from __future__ import annotations

import json
import math
import os
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import exact, rates, spectral
from .config import ExperimentConfig
from .errors import UnsupportedSpecError, WPMEError
from .mesh import (DIRICHLET, NEUMANN, assemble, build_mesh, cell_average, default_grading,
                   norm)
from .solver import RECORD_FIELDS, SolverConfig, Trajectory, evolve
from .weights import admissible_sigma, sobolev_exponent

CSV_HEADER = "t," + ",".join(RECORD_FIELDS)

# default relative tolerances per kind (overridden by ``tol`` in the config)
DEFAULT_TOL = {
    "barenblatt-verify": 0.01,
    "smoothing": 0.10,
    "decay-zero-mean": 0.10,
    "decay-mean": 0.05,
    "spectral": 1e-3,
    "lemma31-check": 0.01,
}


@dataclass
class Report:
    kind: str
    label: str
    config: dict
    config_hash: str
    verdicts: list = field(default_factory=list)
    fits: dict = field(default_factory=dict)
    predicted: dict = field(default_factory=dict)
    values: dict = field(default_factory=dict)
    error: Optional[dict] = None
    rows: list = field(default_factory=list)
    curves: dict = field(default_factory=dict)
    wall_clock: float = 0.0

    @property
    def status(self) -> str:
        if self.error is not None:
            return "error"
        return "pass" if all(v["passed"] for v in self.verdicts) else "fail"

    @property
    def exit_code(self) -> int:
        return {"pass": 0, "fail": 1, "error": 2}[self.status]

    def to_dict(self) -> dict:
        return _jsonable({
            "kind": self.kind, "label": self.label, "config": self.config,
            "config_hash": self.config_hash, "status": self.status,
            "verdicts": self.verdicts, "fits": self.fits, "predicted": self.predicted,
            "values": self.values, "error": self.error,
            "files": sorted(["report.json", "timing.json"]
                            + (["trajectory.csv"] if self.rows else [])
                            + [f"fit_{k}.dat" for k in self.curves]),
        })

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def verdict(self, name: str, value, expected, tolerance, passed: bool, rule: str) -> None:
        self.verdicts.append({
            "name": name, "value": value, "expected": expected, "tolerance": tolerance,
            "rule": rule, "passed": bool(passed), "config": self.label,
            "config_hash": self.config_hash,
        })


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if math.isfinite(x):
            return x
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def format_csv(rows) -> str:
    lines = [CSV_HEADER] + [",".join(_fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def format_curve(xs, ys) -> str:
    return "".join(f"{_fmt(a)} {_fmt(b)}\n" for a, b in zip(xs, ys))


# -- building blocks -------------------------------------------------------------------

def build_operators(cfg: ExperimentConfig, n: Optional[int] = None, bc: Optional[str] = None):
    spec = cfg.weight_spec()
    g = cfg.grading if cfg.grading is not None else default_grading(spec)
    mesh = build_mesh(spec.domain, n or cfg.n_cells, g)
    return assemble(spec, mesh, bc or cfg.bc)


def solver_config(cfg: ExperimentConfig) -> SolverConfig:
    return SolverConfig(m=cfg.m, dt_policy=cfg.dt_policy, dt=cfg.dt, dt0=cfg.dt0, ramp=cfg.ramp,
                        dt_max=cfg.dt_max, newton_tol=cfg.newton_tol, max_newton=cfg.max_newton,
                        eps_reg=cfg.eps_reg, bc=cfg.bc)


def output_times(cfg: ExperimentConfig) -> np.ndarray:
    if cfg.output_times is not None:
        return np.asarray(cfg.output_times, dtype=float)
    if cfg.time_spacing == "geometric":
        return np.geomspace(cfg.t_first, cfg.t_end, cfg.n_out)
    return np.linspace(cfg.t_first, cfg.t_end, cfg.n_out)


def barenblatt_params(cfg: ExperimentConfig) -> exact.BarenblattParams:
    spec = cfg.weight_spec()
    if spec.family == "radial_power":
        kind, kw = "nd_radial", {"N": spec.N}
    elif spec.family == "power" and spec.alpha == 0.0 and 1.0 < spec.beta < 2.0:
        kind, kw = "weighted_1d", {"beta": spec.beta}
    else:
        raise UnsupportedSpecError("Barenblatt data need radial_power or power(alpha=0, 1<beta<2) weights")
    if spec.a != 0.0:
        raise UnsupportedSpecError("Barenblatt data need the domain to start at x = 0")
    if cfg.datum_C is not None:
        return exact.BarenblattParams(kind, cfg.m, cfg.datum_C, **kw)
    # support reaches the confinement margin exactly at the final output time
    return exact.barenblatt_for_mass_radius(kind, cfg.m, float(output_times(cfg)[-1]),
                                            exact.CONFINEMENT_MARGIN * spec.b, **kw)


def first_mode(ops) -> np.ndarray:
    """First eigenvector (Neumann: first nonconstant mode), scaled to unit max and positive at x=a."""
    if ops.bc == DIRICHLET:
        v = spectral.lambda1_dirichlet(ops).vector
    else:
        v = spectral.lambda1_neumann(ops).vector
    v = v / np.max(np.abs(v))
    return v if v[0] >= 0 else -v


def initial_datum(cfg: ExperimentConfig, ops) -> np.ndarray:
    x0 = ops.mesh.domain[0]
    if cfg.datum == "constant":
        return np.full(ops.n, cfg.datum_value)
    if cfg.datum == "eigen-perturbation":
        return cfg.datum_mean + cfg.datum_c1 * first_mode(ops)
    if cfg.datum == "spike":
        c = x0 if cfg.datum_center is None else cfg.datum_center
        w, h = cfg.datum_width, cfg.datum_height
        return cell_average(ops, lambda x: np.where(np.abs(x - c) < w, h, 0.0))
    if cfg.datum == "barenblatt":
        p = barenblatt_params(cfg)
        return cell_average(ops, lambda x: exact.barenblatt_value(p, x - x0, cfg.datum_t0))
    if cfg.datum == "power":
        e, h, cap = cfg.datum_exponent, cfg.datum_height, cfg.datum_cap

        def f(x):
            v = h * (x - x0) ** (-e)
            return v if cap is None else np.minimum(v, cap)
        return cell_average(ops, f)
    return np.asarray(cfg.datum_samples, dtype=float)


def _time_offset(cfg: ExperimentConfig) -> float:
    return cfg.datum_t0 if cfg.datum == "barenblatt" else 0.0


def simulate(cfg: ExperimentConfig, ops=None, store_snapshots: bool = False):
    """Evolve the configured datum; returned times are physical (Barenblatt data start at t0)."""
    ops = ops if ops is not None else build_operators(cfg)
    u0 = initial_datum(cfg, ops)
    t_out = output_times(cfg)
    off = _time_offset(cfg)
    if off and not t_out[0] > off:
        raise ValueError("output times must exceed datum_t0 for Barenblatt data")
    traj = evolve(ops, solver_config(cfg), u0, t_out - off, q0=cfg.q0,
                  store_snapshots=store_snapshots or cfg.store_snapshots)
    traj.times = traj.times + off
    return ops, traj


def _rows(traj: Trajectory) -> list:
    return [tuple(map(float, r)) for r in traj.rows()]


def _window(lo, hi, t):
    return (t[1] if lo is None else lo, t[-1] if hi is None else hi)


def _rel(a: float, b: float) -> float:
    return abs(a / b - 1.0)


def _mass_drift(traj: Trajectory) -> float:
    mass = traj["mass"]
    return float(np.max(np.abs(mass - mass[0])) / (1.0 + abs(mass[0])))


def _add_power_fit(rep: Report, name: str, traj: Trajectory, column: str, window):
    t = traj.times[1:]
    v = traj[column][1:]
    fit = rates.fit_power(t, v, window)
    rep.fits[name] = fit.as_dict()
    sel = (t >= fit.window[0]) & (t <= fit.window[1])
    rep.curves[name] = (t[sel], v[sel])
    return fit


# -- kinds -------------------------------------------------------------------------

def _run_simulate(cfg, rep):
    ops, traj = simulate(cfg)
    rep.rows = _rows(traj)
    if ops.bc == NEUMANN:
        drift = _mass_drift(traj)
        rep.verdict("mass_drift", drift, 0.0, 1e-12, drift <= 1e-12, "|mass(t)-mass(0)|/(1+|mass(0)|) <= tol")
    for col in ("l1", "l2", "lq0", "linf"):
        inc = float(np.max(np.diff(traj[col]))) if len(traj.times) > 1 else 0.0
        rep.verdict(f"{col}_nonincreasing", inc, 0.0, 1e-10, inc <= 1e-10, "max increment <= tol")


def _run_barenblatt(cfg, rep):
    p = barenblatt_params(cfg)
    spec = cfg.weight_spec()
    t_conf = exact.time_of_confinement(p, spec.b - spec.a)
    t_out = output_times(cfg)
    rep.predicted.update(p.exponents())
    rep.predicted["decay_exponent"] = p.decay_exponent
    rep.values["confinement_time"] = t_conf
    rep.verdict("inside_confinement_window", float(t_out[-1]), t_conf, 0.0,
                t_out[-1] <= t_conf * (1.0 + 1e-12), "final time <= confinement time")
    ops, traj = simulate(cfg, store_snapshots=True)
    rep.rows = _rows(traj)
    x0 = spec.a
    errs = []
    for t, u in zip(traj.times[1:], traj.snapshots[1:]):
        ex = cell_average(ops, lambda x: exact.barenblatt_value(p, x - x0, t))
        errs.append(float(np.max(np.abs(u - ex)) / np.max(np.abs(ex))))
    tol = cfg.tol if cfg.tol is not None else DEFAULT_TOL[cfg.kind]
    err = max(errs)
    rep.values["linf_rel_error_by_time"] = errs
    rep.verdict("linf_rel_error", err, 0.0, tol, err <= tol, "max_t ||u - u_B||_inf / ||u_B||_inf <= tol")
    drift = _mass_drift(traj)
    rep.verdict("mass_drift", drift, 0.0, cfg.tol_mass, drift <= cfg.tol_mass,
                "|mass(t)-mass(0)|/(1+|mass(0)|) <= tol")
    window = _window(cfg.fit_t_lo, cfg.fit_t_hi, traj.times)
    fit = _add_power_fit(rep, "linf", traj, "linf", window)
    rel = _rel(fit.exponent, p.decay_exponent)
    rep.verdict("sup_decay_exponent", fit.exponent, p.decay_exponent, 0.05, rel <= 0.05,
                "|fit/expected - 1| <= tol")
    if cfg.convergence_levels >= 3:
        _self_convergence(cfg, rep)


def _restrict(ops_fine, u, k):
    mass = ops_fine.cell_mass.reshape(-1, k)
    return (mass * u.reshape(-1, k)).sum(axis=1) / mass.sum(axis=1)


def _self_convergence(cfg, rep):
    levels = [cfg.n_cells // 2 ** i for i in reversed(range(cfg.convergence_levels))]
    if levels[0] < 2 or any(n * 2 ** i != levels[-1] for i, n in enumerate(reversed(levels))):
        raise ValueError("n_cells must be divisible by 2^(convergence_levels-1)")
    final = []
    coarse = None
    for n in levels:
        ops = build_operators(cfg, n)
        if coarse is None:
            coarse = ops
        _, traj = simulate(cfg, ops=ops, store_snapshots=True)
        final.append((ops, traj.snapshots[-1]))
    on_coarse = [_restrict(o, u, o.n // coarse.n) if o.n > coarse.n else u for o, u in final]
    diffs = [norm(coarse, on_coarse[i] - on_coarse[i + 1], 1) for i in range(len(levels) - 1)]
    orders = [math.log2(diffs[i] / diffs[i + 1]) for i in range(len(diffs) - 1)]
    rep.values["convergence_levels"] = levels
    rep.values["successive_differences_l1"] = diffs
    rep.values["self_convergence_orders"] = orders
    order = orders[-1]
    rep.verdict("self_convergence_order", order, cfg.min_order, 0.0, order >= cfg.min_order,
                "log2 ratio of successive nu-L1 differences >= expected")


def _smoothing_sigma(cfg):
    if cfg.sigma is not None:
        return cfg.sigma
    return sobolev_exponent(cfg.weight_spec())


def _run_smoothing(cfg, rep):
    sigma = _smoothing_sigma(cfg)
    pred = rates.predicted_smoothing_exponent(cfg.q0, cfg.m, sigma)
    rep.predicted.update({"sigma": sigma, "smoothing_exponent": pred})
    ops, traj = simulate(cfg)
    rep.rows = _rows(traj)
    tol = cfg.tol if cfg.tol is not None else DEFAULT_TOL[cfg.kind]
    fit = _add_power_fit(rep, "linf", traj, "linf", _window(cfg.fit_t_lo, cfg.fit_t_hi, traj.times))
    rep.verdict("smoothing_exponent", fit.exponent, pred, tol, _rel(fit.exponent, pred) <= tol,
                "|fit/expected - 1| <= tol")
    rep.verdict("smoothing_fit_r2", fit.r_squared, 1.0, cfg.r2_min, fit.r_squared >= cfg.r2_min,
                "r^2 >= tol")
    if cfg.late_t_lo is not None:
        late = _add_power_fit(rep, "linf_late", traj, "linf",
                              _window(cfg.late_t_lo, cfg.late_t_hi, traj.times))
        rep.predicted["late_exponent"] = rates.predicted_zero_mean_exponent(cfg.m)
        rep.verdict("late_power_decay_r2", late.r_squared, 1.0, cfg.r2_min,
                    late.r_squared >= cfg.r2_min and late.exponent > 0, "r^2 >= tol and exponent > 0")


def _run_decay_zero_mean(cfg, rep):
    pred = rates.predicted_zero_mean_exponent(cfg.m)
    rep.predicted["zero_mean_exponent"] = pred
    ops, traj = simulate(cfg)
    rep.rows = _rows(traj)
    tol = cfg.tol if cfg.tol is not None else DEFAULT_TOL[cfg.kind]
    lo = cfg.late_t_lo if cfg.late_t_lo is not None else cfg.fit_t_lo
    hi = cfg.late_t_hi if cfg.late_t_hi is not None else cfg.fit_t_hi
    fit = _add_power_fit(rep, "linf", traj, "linf", _window(lo, hi, traj.times))
    rep.verdict("zero_mean_exponent", fit.exponent, pred, tol, _rel(fit.exponent, pred) <= tol,
                "|fit/expected - 1| <= tol")
    scale = float(np.max(traj["linf"]))
    drift = float(np.max(np.abs(traj["mean"])))
    rep.verdict("mean_preserved", drift, 0.0, 1e-12 * scale, drift <= 1e-12 * max(scale, 1.0),
                "max_t |mean(t)| <= tol")


def _run_decay_mean(cfg, rep):
    ops = build_operators(cfg)
    eig = spectral.lambda1_neumann(ops)
    mean0 = float(np.dot(ops.cell_mass, initial_datum(cfg, ops)) / ops.total_mass)
    pred = rates.predicted_exp_rate(cfg.m, eig.lambda1, mean0)
    rep.predicted.update({"lambda1": eig.lambda1, "mean": mean0, "exp_rate": pred})
    _, traj = simulate(cfg, ops=ops)
    rep.rows = _rows(traj)
    t = traj.times[1:]
    v = traj["linf_err_mean"][1:]
    fit = rates.fit_exp(t, v, _window(cfg.fit_t_lo, cfg.fit_t_hi, traj.times))
    rep.fits["linf_err_mean"] = fit.as_dict()
    sel = (t >= fit.window[0]) & (t <= fit.window[1])
    rep.curves["linf_err_mean"] = (t[sel], v[sel])
    tol = cfg.tol if cfg.tol is not None else DEFAULT_TOL[cfg.kind]
    rep.verdict("exp_rate", fit.rate, pred, tol, _rel(fit.rate, pred) <= tol, "|fit/expected - 1| <= tol")
    rep.verdict("exp_fit_r2", fit.r_squared, 1.0, cfg.r2_min, fit.r_squared >= cfg.r2_min, "r^2 >= tol")


def _run_spectral(cfg, rep):
    ops = build_operators(cfg, bc=NEUMANN)
    eig = spectral.lambda1_neumann(ops)
    rep.values.update({"lambda1": eig.lambda1, "poincare_constant": eig.lambda1 ** -0.5,
                       "residual": eig.residual, "iterations": eig.iterations})
    if cfg.expected_lambda1 is not None:
        tol = cfg.tol if cfg.tol is not None else DEFAULT_TOL[cfg.kind]
        rel = _rel(eig.lambda1, cfg.expected_lambda1)
        rep.predicted["lambda1"] = cfg.expected_lambda1
        rep.verdict("lambda1", eig.lambda1, cfg.expected_lambda1, tol, rel <= tol,
                    "|value/expected - 1| <= tol")
    xs = ops.mesh.centers
    rep.curves["eigenvector"] = (xs, eig.vector)


def _run_sobolev_scan(cfg, rep):
    spec = cfg.weight_spec()
    levels = spectral.default_levels(cfg.levels_base, cfg.levels_count, cfg.levels_factor,
                                     cfg.levels_grading)
    est = spectral.sobolev_scan(spec, cfg.sigma, cfg.mode, levels, seed=cfg.seed,
                                n_random=cfg.n_random, step=cfg.ascent_step, max_iter=cfg.max_iter)
    expected = cfg.expect
    try:
        rng = admissible_sigma(spec)
        rep.predicted["admissible_sigma"] = rng.as_dict()
        if expected is None:
            expected = "flat" if cfg.sigma in rng else "likely unbounded"
    except UnsupportedSpecError:
        if expected is None:
            raise
    rep.values.update({"refinement_trend": est.refinement_trend, "growth": est.growth,
                       "levels": est.levels, "iterations": est.iterations})
    rep.curves["trend"] = ([n for n, _ in levels], est.refinement_trend)
    rep.verdict("admissibility_verdict", est.verdict, expected,
                {"unbounded_growth": spectral.UNBOUNDED_GROWTH, "flat_growth": spectral.FLAT_GROWTH},
                est.verdict == expected, "classified refinement trend == expected")


def _run_phi_check(cfg, rep):
    rng = np.random.default_rng(cfg.seed)
    lows, highs, bad = [], [], 0
    for _ in range(cfg.samples):
        r = rng.uniform(cfg.r_min, cfg.r_max)
        m = rng.uniform(cfg.m_min, cfg.m_max)
        x = 0.0
        while x == 0.0:
            x = rng.uniform(-cfg.R, cfg.R)
        lo, hi = exact.phi_bounds_margin(r, m, cfg.R, [x])
        lows.append(lo)
        highs.append(hi)
        if not (math.isfinite(lo) and math.isfinite(hi) and lo > 0 and hi > 0):
            bad += 1
    rep.values.update({"low_margin_min": min(lows), "high_margin_max": max(highs),
                       "samples": cfg.samples})
    rep.verdict("phi_margins_finite_positive", bad, 0, 0, bad == 0, "number of bad samples == 0")


def _run_lemma31_check(cfg, rep):
    rng = np.random.default_rng(cfg.seed)
    tol = cfg.tol if cfg.tol is not None else DEFAULT_TOL[cfg.kind]
    worst = 0.0
    pairs = []
    for _ in range(cfg.pairs):
        b, a = sorted(rng.uniform(0.05, 0.95, size=2))
        base = exact.lemma31_sup(a, b, cfg.grid_X, cfg.grid_points)
        ext = exact.lemma31_sup(a, b, 2.0 * cfg.grid_X, 2 * cfg.grid_points, decades=14.0)
        change = _rel(ext, base)
        worst = max(worst, change)
        pairs.append({"alpha": a, "beta": b, "sup": base, "sup_extended": ext, "change": change})
    rep.values["pairs"] = pairs
    rep.verdict("lemma31_sup_stable", worst, 0.0, tol, worst <= tol, "max relative change under grid extension <= tol")
    bad, cases = comparison_grid_failures()
    rep.values["bg05_grid_cases"] = cases
    rep.verdict("bg05_exceeds_sharp", bad, 0, 0, bad == 0,
                "alpha > (m-1) * predicted_smoothing_exponent(q0, m, N/(N-2)) on every grid point")


def comparison_grid():
    for q0 in np.linspace(1.0, 10.0, 10):
        for m in np.linspace(1.1, 5.0, 10):
            for N in (3, 4, 5):
                yield float(q0), float(m), N


def comparison_grid_failures():
    bad = 0
    cases = 0
    for q0, m, N in comparison_grid():
        cases += 1
        alpha = rates.reference_exponent_bg05(q0, m, N)
        sharp = (m - 1.0) * rates.predicted_smoothing_exponent(q0, m, N / (N - 2.0))
        if not alpha > sharp:
            bad += 1
    return bad, cases


_RUNNERS = {
    "simulate": _run_simulate,
    "barenblatt-verify": _run_barenblatt,
    "smoothing": _run_smoothing,
    "decay-zero-mean": _run_decay_zero_mean,
    "decay-mean": _run_decay_mean,
    "spectral": _run_spectral,
    "sobolev-scan": _run_sobolev_scan,
    "phi-check": _run_phi_check,
    "lemma31-check": _run_lemma31_check,
}


# -- entry points ----------------------------------------------------------------------

def run(cfg: ExperimentConfig, out_dir=None) -> Report:
    """Execute one experiment.  Module errors are captured in ``report.error``."""
    rep = Report(cfg.kind, cfg.label(), cfg.to_dict(), cfg.config_hash())
    start = time.perf_counter()
    try:
        _RUNNERS[cfg.kind](cfg, rep)
    except (WPMEError, ValueError, ArithmeticError) as exc:
        rep.error = {"type": type(exc).__name__, "message": str(exc),
                     "where": traceback.extract_tb(exc.__traceback__)[-1].name}
    rep.wall_clock = time.perf_counter() - start
    if out_dir is not None:
        write_report(rep, out_dir)
    return rep


def write_report(rep: Report, out_dir) -> Path:
    d = Path(out_dir)
    d.mkdir(parents=True, exist_ok=True)
    if rep.rows:
        _write(d / "trajectory.csv", format_csv(rep.rows))
    for name, (xs, ys) in rep.curves.items():
        _write(d / f"fit_{name}.dat", format_curve(xs, ys))
    _write(d / "report.json", rep.to_json())
    _write(d / "timing.json", json.dumps({"wall_clock_s": rep.wall_clock}) + "\n")
    return d


def _write(path: Path, text: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def _sweep_job(args):
    cfg, out_dir = args
    rep = run(cfg, out_dir)
    return cfg.config_hash(), rep.to_dict()


def sweep(configs, out_dir=None, workers: Optional[int] = None) -> dict:
    """Run configs concurrently and merge the reports keyed by config hash.

    Duplicate configs are all executed; their reports must agree, otherwise the
    key is marked as an error.  The merged dict is sorted by key.
    """
    configs = list(configs)
    jobs = []
    seen = set()
    for cfg in configs:
        key = cfg.config_hash()
        target = None
        if out_dir is not None and key not in seen:
            target = str(Path(out_dir) / key)
        seen.add(key)
        jobs.append((cfg, target))
    results: dict = {}
    errors: dict = {}
    if jobs:
        workers = workers or min(len(jobs), os.cpu_count() or 1)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for key, rep in pool.map(_sweep_job, jobs):
                if key in results and results[key] != rep:
                    errors[key] = "duplicate configs produced different reports"
                results.setdefault(key, rep)
    for key, msg in errors.items():
        results[key] = dict(results[key], status="error",
                            error={"type": "NondeterminismError", "message": msg})
    merged = {
        "runs": {k: results[k] for k in sorted(results)},
        "count": len(configs),
        "status": sweep_status(results.values()),
    }
    if out_dir is not None:
        Path(out_dir).mkdir(parents=True, exist_ok=True)
        _write(Path(out_dir) / "sweep.json", json.dumps(_jsonable(merged), sort_keys=True, indent=2) + "\n")
    return merged


def sweep_status(reports) -> str:
    statuses = {r["status"] for r in reports}
    if "error" in statuses:
        return "error"
    if "fail" in statuses:
        return "fail"
    return "pass"


EXIT_CODES = {"pass": 0, "fail": 1, "error": 2}
