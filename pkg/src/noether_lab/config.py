"""Strict run configuration for ``noether-lab verify``.

The format is a JSON object; unknown keys anywhere are rejected with a
close-match suggestion, because a mistyped tolerance key would otherwise
silently fall back to its default.
"""
from __future__ import annotations

import copy
import difflib
import json
import math
from dataclasses import dataclass, field
from typing import Any

from .errors import BadValue, ParseError, UnknownKey

SUITES = ("consistency", "conservation", "converse", "algebra", "trajectory", "qfock", "qwave")
MODELS = ("constant_force", "free", "harmonic", "lattice_scalar")
INTEGRATOR_METHODS = ("verlet", "midpoint", "rk4")

MODEL_PARAMS: dict[str, dict[str, Any]] = {
    "constant_force": {"m": 1.0, "F": [1.0]},
    "free": {"m": 1.0, "dim": 1},
    "harmonic": {"omegas": [1.0], "t0": 0.0},
    "lattice_scalar": {"n_sites": 4, "mu": 1.0, "spacing": 1.0, "t0": 0.0},
}

# transformations that can be requested per model; "scaling" is the
# deliberately bogus candidate phi = q, chi = 0, Lambda = 0
TRANSFORMATIONS: dict[str, tuple[str, ...]] = {
    "constant_force": ("translation", "boost", "scaling"),
    "free": ("translation", "boost", "scaling"),
    "harmonic": ("converse_re", "converse_im", "scaling"),
    "lattice_scalar": ("converse_re", "converse_im", "scaling"),
}
DEFAULT_TRANSFORMATIONS: dict[str, list[str]] = {
    "constant_force": ["translation", "boost"],
    "free": ["translation", "boost"],
    "harmonic": ["converse_re", "converse_im"],
    "lattice_scalar": ["converse_re", "converse_im"],
}

DEFAULT_TOLERANCES: dict[str, float] = {
    "consistency": 1e-10,
    "charge": 1e-12,
    "generator": 1e-10,
    "charge_time": 1e-9,
    "lambda_independence": 1e-10,
    "conservation": 1e-10,
    "converse": 1e-9,
    "round_trip": 1e-10,
    "covariance": 1e-6,
    "action": 1e-6,
    "algebra": 1e-10,
    "closure": 1e-9,
    "jacobi": 1e-6,
    "drift": 1e-10,
    "drift_oscillator": 5e-4,
    "symplectic": 1e-8,
    "reconstruction": 1e-10,
    "energy_shift": 1e-12,
    "qfock": 1e-12,
    "qfock_spectrum": 1e-10,
    "qfock_constancy": 1e-7,
    "qwave": 1e-6,
    "qwave_phase": 1e-9,
    "qwave_spike": 1e-8,
    "qwave_norm": 1e-12,
    "overlap": 1e-5,
}

DEFAULT_INTEGRATOR = {"method": "verlet", "h": 0.01, "n": 10000}
DEFAULT_QFOCK = {"cutoff": 16, "omega": 1.0, "hbar": 1.0, "t0": 0.0}
DEFAULT_QWAVE = {"n": 4096, "p_min": -40.0, "p_max": 40.0, "hbar": 1.0, "m": 1.0, "F": 1.0}

TOP_LEVEL = (
    "model",
    "params",
    "suites",
    "tolerances",
    "integrator",
    "seed",
    "output_dir",
    "n_states",
    "transformations",
    "qfock",
    "qwave",
)


@dataclass(frozen=True)
class RunConfig:
    model: str
    params: dict
    suites: list
    tolerances: dict
    integrator: dict
    seed: int = 0
    output_dir: str = "noether_lab_out"
    n_states: int = 100
    transformations: list = field(default_factory=list)
    qfock: dict = field(default_factory=lambda: dict(DEFAULT_QFOCK))
    qwave: dict = field(default_factory=lambda: dict(DEFAULT_QWAVE))

    def to_dict(self) -> dict:
        return {k: copy.deepcopy(getattr(self, k)) for k in TOP_LEVEL}

    def with_overrides(self, **kw) -> "RunConfig":
        d = self.to_dict()
        d.update({k: v for k, v in kw.items() if v is not None})
        return RunConfig(**d)


def _suggest(key: str, options) -> str | None:
    hits = difflib.get_close_matches(key, list(options), n=1, cutoff=0.6)
    return hits[0] if hits else None


def _strict_keys(obj: dict, allowed, where: str):
    for key in obj:
        if key not in allowed:
            raise UnknownKey(key, _suggest(key, allowed), where)


def _number(x, where, positive=False, integer=False):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise BadValue(f"{where} must be a number, got {x!r}")
    if integer and int(x) != x:
        raise BadValue(f"{where} must be an integer, got {x!r}")
    if not math.isfinite(x):
        raise BadValue(f"{where} must be finite")
    if positive and not x > 0:
        raise BadValue(f"{where} must be positive, got {x!r}")
    return int(x) if integer else float(x)


def _vector(x, where):
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        x = [x]
    if not isinstance(x, list) or not x:
        raise BadValue(f"{where} must be a non-empty list of numbers")
    return [_number(v, f"{where}[{i}]") for i, v in enumerate(x)]


def _model_params(model: str, raw: dict) -> dict:
    if not isinstance(raw, dict):
        raise BadValue("params must be an object")
    allowed = MODEL_PARAMS[model]
    _strict_keys(raw, allowed, f"params of model {model!r}")
    out = copy.deepcopy(allowed)
    for k, v in raw.items():
        where = f"params.{k}"
        if k in ("F", "omegas"):
            out[k] = _vector(v, where)
        elif k in ("n_sites", "dim"):
            out[k] = _number(v, where, positive=True, integer=True)
        elif k in ("m", "spacing"):
            out[k] = _number(v, where, positive=True)
        elif k == "mu":
            # mu = 0 is a model-level error (zero mode), reported when the model is built
            out[k] = _number(v, where)
        else:
            out[k] = _number(v, where)
    if model == "harmonic" and any(w <= 0 for w in out["omegas"]):
        raise BadValue("params.omegas must all be positive")
    return out


def _sub_map(raw, defaults: dict, where: str, positive=(), integer=()) -> dict:
    if raw is None:
        return dict(defaults)
    if not isinstance(raw, dict):
        raise BadValue(f"{where} must be an object")
    _strict_keys(raw, defaults, where)
    out = dict(defaults)
    for k, v in raw.items():
        out[k] = _number(v, f"{where}.{k}", positive=k in positive, integer=k in integer)
    return out


def parse_config_dict(data: Any) -> RunConfig:
    if not isinstance(data, dict):
        raise ParseError("configuration must be a JSON object")
    _strict_keys(data, TOP_LEVEL, "config")
    model = data.get("model")
    if not isinstance(model, str):
        raise BadValue("model must be a string naming a built-in model")
    if model not in MODELS:
        raise UnknownKey(model, _suggest(model, MODELS), "model names")
    params = _model_params(model, data.get("params", {}))

    suites = data.get("suites", list(SUITES))
    if not isinstance(suites, list) or not suites:
        raise BadValue("suites must be a non-empty list")
    for s in suites:
        if not isinstance(s, str) or s not in SUITES:
            raise UnknownKey(s, _suggest(str(s), SUITES), "suites")
    suites = list(dict.fromkeys(suites))

    tolerances = dict(DEFAULT_TOLERANCES)
    raw_tol = data.get("tolerances", {})
    if not isinstance(raw_tol, dict):
        raise BadValue("tolerances must be an object")
    _strict_keys(raw_tol, DEFAULT_TOLERANCES, "tolerances")
    for k, v in raw_tol.items():
        tolerances[k] = _number(v, f"tolerances.{k}", positive=True)

    integ = dict(DEFAULT_INTEGRATOR)
    raw_int = data.get("integrator", {})
    if not isinstance(raw_int, dict):
        raise BadValue("integrator must be an object")
    _strict_keys(raw_int, DEFAULT_INTEGRATOR, "integrator")
    if "method" in raw_int:
        m = raw_int["method"]
        if m not in INTEGRATOR_METHODS:
            raise UnknownKey(str(m), _suggest(str(m), INTEGRATOR_METHODS), "integrator methods")
        integ["method"] = m
    if "h" in raw_int:
        integ["h"] = _number(raw_int["h"], "integrator.h", positive=True)
    if "n" in raw_int:
        integ["n"] = _number(raw_int["n"], "integrator.n", positive=True, integer=True)

    seed = _number(data.get("seed", 0), "seed", integer=True)
    if seed < 0:
        raise BadValue("seed must be non-negative")
    n_states = _number(data.get("n_states", 100), "n_states", positive=True, integer=True)
    output_dir = data.get("output_dir", "noether_lab_out")
    if not isinstance(output_dir, str) or not output_dir:
        raise BadValue("output_dir must be a non-empty string")

    trs = data.get("transformations", DEFAULT_TRANSFORMATIONS[model])
    if not isinstance(trs, list):
        raise BadValue("transformations must be a list")
    for name in trs:
        if name not in TRANSFORMATIONS[model]:
            raise UnknownKey(str(name), _suggest(str(name), TRANSFORMATIONS[model]), f"transformations of {model!r}")

    qfock = _sub_map(data.get("qfock"), DEFAULT_QFOCK, "qfock", positive=("cutoff", "omega", "hbar"), integer=("cutoff",))
    qwave = _sub_map(data.get("qwave"), DEFAULT_QWAVE, "qwave", positive=("n", "hbar", "m"), integer=("n",))

    return RunConfig(model, params, suites, tolerances, integ, seed, output_dir, n_states, list(trs), qfock, qwave)


def parse_config(text: str) -> RunConfig:
    """Parse and validate JSON text, filling defaults."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed configuration: {exc}") from exc
    return parse_config_dict(data)


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
