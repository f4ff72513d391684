"""Flat key-value experiment configuration.

A config is a single JSON object with scalar (or list-of-number) values.
Unknown keys are rejected so typos fail loudly instead of silently using
defaults.
"""
from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .errors import ConfigError
from .weights import WeightSpec

KINDS = ("simulate", "barenblatt-verify", "smoothing", "decay-zero-mean", "decay-mean",
         "spectral", "sobolev-scan", "phi-check", "lemma31-check")
DATUMS = ("constant", "eigen-perturbation", "spike", "barenblatt", "power", "custom")


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    name: str = ""
    seed: int = 0
    # weights
    family: str = "unit"
    alpha: float = 0.0
    beta: float = 0.0
    a: float = 0.0
    b: float = 1.0
    N: Optional[int] = None
    # mesh
    n_cells: int = 256
    grading: Optional[float] = None  # None -> 2 for weights singular at x=0, else 1
    # solver
    m: float = 2.0
    bc: str = "neumann"
    dt_policy: str = "ramp"
    dt: float = 1e-3
    dt0: float = 1e-8
    ramp: float = 1.3
    dt_max: Optional[float] = None
    newton_tol: float = 1e-11
    max_newton: int = 50
    eps_reg: float = 1e-12
    # initial datum
    datum: str = "constant"
    datum_value: float = 1.0
    datum_mean: float = 0.0
    datum_c1: float = 0.05
    datum_width: float = 0.05
    datum_height: float = 1.0
    datum_center: Optional[float] = None
    datum_C: Optional[float] = None
    datum_t0: float = 0.01
    datum_exponent: float = 1.0
    datum_cap: Optional[float] = None
    datum_samples: Optional[list] = None
    # output times
    output_times: Optional[list] = None
    t_first: float = 1e-6
    t_end: float = 1.0
    n_out: int = 61
    time_spacing: str = "geometric"
    # fits and predictions
    q0: float = 1.0
    sigma: Optional[float] = None
    fit_t_lo: Optional[float] = None
    fit_t_hi: Optional[float] = None
    late_t_lo: Optional[float] = None
    late_t_hi: Optional[float] = None
    tol: Optional[float] = None
    r2_min: float = 0.995
    # barenblatt-verify
    convergence_levels: int = 0
    min_order: float = 1.5
    tol_mass: float = 1e-12
    # spectral
    expected_lambda1: Optional[float] = None
    # sobolev-scan
    mode: str = "mean_centered"
    levels_base: int = 32
    levels_count: int = 3
    levels_factor: int = 4
    levels_grading: float = 4.0
    n_random: int = 5
    max_iter: int = 2000
    ascent_step: float = 0.1
    expect: Optional[str] = None
    # phi-check / lemma31-check
    samples: int = 1000
    R: float = 2.0
    r_min: float = 0.5
    r_max: float = 50.0
    m_min: float = 1.1
    m_max: float = 5.0
    pairs: int = 5
    grid_X: float = 1e3
    grid_points: int = 400
    # output
    output_dir: Optional[str] = None
    store_snapshots: bool = False

    def weight_spec(self) -> WeightSpec:
        return WeightSpec(family=self.family, alpha=self.alpha, beta=self.beta,
                          a=self.a, b=self.b, N=self.N)

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in dataclasses.fields(self)}

    def canonical_json(self) -> str:
        d = {k: v for k, v in self.to_dict().items() if k != "output_dir"}
        return json.dumps(d, sort_keys=True, separators=(",", ":"))

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()[:16]

    def label(self) -> str:
        return self.name or f"{self.kind}-{self.config_hash()}"


_FIELDS = {f.name: f for f in dataclasses.fields(ExperimentConfig)}
_REQUIRED = {
    "barenblatt-verify": ("family",),
    "decay-mean": ("datum_mean",),
    "sobolev-scan": ("sigma",),
}


def _coerce(name: str, value):
    f = _FIELDS[name]
    if value is None:
        return None
    t = str(f.type)
    if isinstance(value, (dict,)):
        raise ConfigError(f"{name}: nested structures are not allowed")
    if "list" in t:
        if not isinstance(value, list) or any(isinstance(x, (list, dict)) for x in value):
            raise ConfigError(f"{name}: expected a flat list")
        return [float(x) for x in value]
    if "bool" in t:
        if not isinstance(value, bool):
            raise ConfigError(f"{name}: expected true/false")
        return value
    if "int" in t:
        if isinstance(value, bool) or float(value) != int(value):
            raise ConfigError(f"{name}: expected an integer")
        return int(value)
    if "float" in t:
        if isinstance(value, bool):
            raise ConfigError(f"{name}: expected a number")
        v = float(value)
        if math.isnan(v):
            raise ConfigError(f"{name}: NaN is not allowed")
        return v
    return str(value)


def validate(cfg: ExperimentConfig) -> ExperimentConfig:
    if cfg.kind not in KINDS:
        raise ConfigError(f"unknown experiment kind {cfg.kind!r}; expected one of {KINDS}")
    if cfg.datum not in DATUMS:
        raise ConfigError(f"unknown datum {cfg.datum!r}; expected one of {DATUMS}")
    if cfg.bc not in ("neumann", "dirichlet"):
        raise ConfigError("bc must be 'neumann' or 'dirichlet'")
    if cfg.mode not in ("mean_centered", "dirichlet", "weak_form"):
        raise ConfigError(f"unknown sobolev mode {cfg.mode!r}")
    if cfg.time_spacing not in ("geometric", "linear"):
        raise ConfigError("time_spacing must be 'geometric' or 'linear'")
    if cfg.n_cells < 2:
        raise ConfigError("n_cells must be >= 2")
    if not cfg.m > 1:
        raise ConfigError("m must exceed 1")
    if cfg.datum == "custom" and (cfg.datum_samples is None or len(cfg.datum_samples) != cfg.n_cells):
        raise ConfigError("custom datum needs datum_samples with n_cells entries")
    if cfg.kind == "decay-mean" and cfg.datum_mean == 0.0:
        raise ConfigError("decay-mean needs a nonzero datum_mean")
    if cfg.kind == "sobolev-scan" and (cfg.sigma is None or not cfg.sigma > 1):
        raise ConfigError("sobolev-scan needs sigma > 1")
    if cfg.kind == "barenblatt-verify" and cfg.family not in ("radial_power", "power"):
        raise ConfigError("barenblatt-verify needs radial_power or power (alpha=0, 1<beta<2) weights")
    if cfg.expect not in (None, "flat", "likely unbounded"):
        raise ConfigError("expect must be 'flat' or 'likely unbounded'")
    try:
        cfg.weight_spec()
    except Exception as exc:  # surface weight errors as config errors
        raise ConfigError(f"invalid weights: {exc}") from exc
    return cfg


def from_dict(d: dict) -> ExperimentConfig:
    if not isinstance(d, dict):
        raise ConfigError("a config must be a JSON object")
    unknown = sorted(set(d) - set(_FIELDS))
    if unknown:
        raise ConfigError(f"unknown config keys: {unknown}")
    if "kind" not in d:
        raise ConfigError("config needs a 'kind'")
    for k in _REQUIRED.get(d["kind"], ()):
        if k not in d:
            raise ConfigError(f"{d['kind']} config needs {k!r}")
    kwargs = {k: _coerce(k, v) for k, v in d.items()}
    return validate(ExperimentConfig(**kwargs))


def load(path) -> ExperimentConfig:
    with open(path) as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
    return from_dict(d)


def dump(cfg: ExperimentConfig, path) -> None:
    Path(path).write_text(json.dumps(cfg.to_dict(), sort_keys=True, indent=2) + "\n")
