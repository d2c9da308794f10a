"""Run configuration: a JSON document with a fixed schema.

Unknown keys and wrongly typed values are rejected with the dotted path of
the offending field.  :func:`build_models` turns a config into the validated
1D map and planar horseshoe.
"""

from __future__ import annotations

import copy
import json

from .errors import ConfigError

DEFAULT_CONFIG = {
    "normal_form": {"alpha": 1.0, "beta": 1.0, "delta1": 0.3, "t1": 0.05, "t2": 0.05},
    "extension": {"p": -0.38, "delta2": 0.03, "p_tilde": 0.32, "slope_p": 1.6,
                  "slope_right": 1.5, "blend_width": 0.05, "c1": 1.5, "c2": 0.6,
                  "a": -0.25, "b": 0.25},
    "horseshoe": {"zeta": 2.0, "headroom": 1.25, "lambda_factor": 0.5,
                  "lambda": None, "sigma_tilde": None, "column_centre": 0.75},
    "certify": {"depth": 10, "max_depth": 14, "epsilon": None, "orbits": 1000},
    "sweep": {"mu_min": -0.04, "mu_max": 0.04, "steps": 11},
    "intermittency": {"mu_list": [1e-2, 1e-3, 1e-4, 1e-5, 1e-6], "budget": 100000000},
    "orbit": {"x": -0.38, "y": -0.38, "steps": 20},
    "seed": 0,
}

_NULLABLE = {("horseshoe", "lambda"), ("horseshoe", "sigma_tilde"),
             ("certify", "epsilon")}
_INTS = {("certify", "depth"), ("certify", "max_depth"), ("certify", "orbits"),
         ("sweep", "steps"), ("intermittency", "budget"), ("orbit", "steps"), ("seed",)}


def default_config():
    return copy.deepcopy(DEFAULT_CONFIG)


def _check(path, value, default):
    name = ".".join(path)
    if isinstance(default, dict):
        if not isinstance(value, dict):
            raise ConfigError("%s: expected an object" % name)
        out = {}
        for k, v in value.items():
            if k not in default:
                raise ConfigError("%s: unknown field" % ".".join(path + (k,)))
            out[k] = _check(path + (k,), v, default[k])
        for k, v in default.items():
            out.setdefault(k, copy.deepcopy(v))
        return out
    if isinstance(default, list):
        if not isinstance(value, list) or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
            raise ConfigError("%s: expected a list of numbers" % name)
        return [float(v) for v in value]
    if value is None:
        if path in _NULLABLE:
            return None
        raise ConfigError("%s: must not be null" % name)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError("%s: expected a number" % name)
    if path in _INTS:
        if int(value) != value:
            raise ConfigError("%s: expected an integer" % name)
        return int(value)
    return float(value)


def parse_config(text):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("config parse error at line %d, column %d: %s"
                          % (exc.lineno, exc.colno, exc.msg)) from None
    return _check((), raw, DEFAULT_CONFIG)


def load_config(path=None):
    if path is None:
        return default_config()
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError("cannot read config %s: %s" % (path, exc)) from None
    return parse_config(text)


def build_models(cfg, check=True):
    """``(global_map, escape_constants, horseshoe)`` from a parsed config."""
    from .escape_analysis import compute_constants
    from .global_map import ExtensionSpec, build
    from .horseshoe2d import solve_constants
    from .normal_form import SaddleNodeNormalForm

    core = SaddleNodeNormalForm(**cfg["normal_form"])
    gm = build(core, ExtensionSpec(**cfg["extension"]), check=check)
    consts = compute_constants(gm)
    hs = cfg["horseshoe"]
    h = solve_constants(gm, zeta=hs["zeta"], headroom=hs["headroom"],
                        lambda_factor=hs["lambda_factor"], consts=consts,
                        lam=hs["lambda"], sigma_tilde=hs["sigma_tilde"],
                        column_centre=hs["column_centre"], check=check)
    return gm, consts, h
