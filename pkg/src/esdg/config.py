"""Run configuration: JSON schema validation and resolution.

Configs are single JSON objects.  Validation is strict: unknown keys are
rejected by name, every field is type-checked, and the fully resolved config
(user values plus defaults) is what gets written into the run metadata, so a
run is reproducible from its output directory alone.
"""

from __future__ import annotations

import json
from typing import Any, Mapping

import numpy as np

from .grid import PERIODIC
from .wallbc import WallSpec, make_heat_flux


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending key."""


CASES = ("run", "mms", "entropy-audit", "blast")
MODELS = ("eulerian", "cns")

_GAS_DEFAULTS = {"gamma": 1.4, "Re": 1.0, "Ma": 0.1, "alpha": 1.0, "Pr": 0.75}
_DISC_DEFAULTS = {"inviscid_interface": "es", "beta0_interface": 0.0,
                  "beta0_wall": 1.0}
_INTEGRATOR_DEFAULTS = {"rtol": 1e-8, "atol": 1e-8, "t_end": 1.0,
                        "dt_init": None, "dt_max": None}
_IC_DEFAULTS = {"kind": "uniform", "state": None,
                "amplitude": 9.0, "width": 0.01}

_TOP_DEFAULTS = {
    "case": "run",
    "model": "eulerian",
    "ndim": 1,
    "p": 2,
    "elements": [8],
    "box": [[0.0, 1.0]],
    "gas": _GAS_DEFAULTS,
    "bcs": {"x1": "periodic"},
    "discretization": _DISC_DEFAULTS,
    "integrator": _INTEGRATOR_DEFAULTS,
    "ic": _IC_DEFAULTS,
    "output_dir": "out",
    "seed": 0,
}


def _merge_section(name: str, defaults: Mapping[str, Any],
                   given: Any) -> dict:
    if given is None:
        return dict(defaults)
    if not isinstance(given, Mapping):
        raise ConfigError(f"section {name!r} must be an object")
    unknown = set(given) - set(defaults)
    if unknown:
        raise ConfigError(f"unknown key {sorted(unknown)[0]!r} in section {name!r}")
    out = dict(defaults)
    out.update(given)
    return out


def _check_number(name: str, value, *, positive=False, nonnegative=False):
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} must be a number, got {value!r}")
    if positive and not value > 0:
        raise ConfigError(f"{name} must be positive")
    if nonnegative and value < 0:
        raise ConfigError(f"{name} must be nonnegative")
    return float(value)


def resolve_config(raw: Mapping[str, Any]) -> dict:
    """Validate a raw config mapping and fill in every default."""
    if not isinstance(raw, Mapping):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - set(_TOP_DEFAULTS)
    if unknown:
        raise ConfigError(f"unknown key {sorted(unknown)[0]!r}")

    cfg = dict(_TOP_DEFAULTS)
    cfg.update(raw)

    if cfg["case"] not in CASES:
        raise ConfigError(f"case must be one of {CASES}, got {cfg['case']!r}")
    if cfg["model"] not in MODELS:
        raise ConfigError(f"model must be one of {MODELS}, got {cfg['model']!r}")
    if cfg["ndim"] not in (1, 2, 3):
        raise ConfigError("ndim must be 1, 2, or 3")
    if not isinstance(cfg["p"], int) or not 1 <= cfg["p"] <= 7:
        raise ConfigError("p must be an integer in 1..7")
    ndim = cfg["ndim"]

    elements = cfg["elements"]
    if (not isinstance(elements, (list, tuple)) or len(elements) != ndim
            or any(not isinstance(k, int) or k < 1 for k in elements)):
        raise ConfigError("elements must list one positive integer per direction")
    cfg["elements"] = [int(k) for k in elements]

    box = cfg["box"]
    if (not isinstance(box, (list, tuple)) or len(box) != ndim
            or any(len(b) != 2 or not b[1] > b[0] for b in box)):
        raise ConfigError("box must list one increasing [lo, hi] pair per direction")
    cfg["box"] = [[float(a), float(b)] for a, b in box]

    gas = _merge_section("gas", _GAS_DEFAULTS, cfg["gas"])
    for key in gas:
        gas[key] = _check_number(f"gas.{key}", gas[key], positive=True)
    if not gas["gamma"] > 1.0:
        raise ConfigError("gas.gamma must exceed 1")
    cfg["gas"] = gas

    disc = _merge_section("discretization", _DISC_DEFAULTS,
                          cfg["discretization"])
    if disc["inviscid_interface"] not in ("ec", "es"):
        raise ConfigError("discretization.inviscid_interface must be 'ec' or 'es'")
    for key in ("beta0_interface", "beta0_wall"):
        disc[key] = _check_number(f"discretization.{key}", disc[key],
                                  nonnegative=True)
    cfg["discretization"] = disc

    integ = _merge_section("integrator", _INTEGRATOR_DEFAULTS,
                           cfg["integrator"])
    for key in ("rtol", "atol", "t_end"):
        integ[key] = _check_number(f"integrator.{key}", integ[key],
                                   positive=True)
    for key in ("dt_init", "dt_max"):
        integ[key] = _check_number(f"integrator.{key}", integ[key],
                                   positive=True)
    cfg["integrator"] = integ

    ic = _merge_section("ic", _IC_DEFAULTS, cfg["ic"])
    if ic["kind"] not in ("uniform", "density_pulse"):
        raise ConfigError("ic.kind must be 'uniform' or 'density_pulse'")
    if ic["kind"] == "uniform":
        state = ic["state"] if ic["state"] is not None else \
            [1.0] + [0.0] * ndim + [1.0]
        if len(state) != ndim + 2:
            raise ConfigError("ic.state must have ndim + 2 entries")
        ic["state"] = [float(x) for x in state]
    cfg["ic"] = ic

    cfg["bcs"] = _validate_bcs(cfg["bcs"], ndim)
    if not isinstance(cfg["seed"], int):
        raise ConfigError("seed must be an integer")
    cfg["output_dir"] = str(cfg["output_dir"])
    return cfg


def _validate_wall(name: str, spec) -> dict:
    defaults = {"kind": "adiabatic", "u_wall": None, "t_wall": None, "g": None}
    wall = _merge_section(name, defaults, spec)
    if wall["kind"] not in ("adiabatic", "heatflux", "isothermal"):
        raise ConfigError(f"{name}.kind must be adiabatic|heatflux|isothermal")
    if wall["g"] is not None:
        g_defaults = {"kind": "zero", "value": 0.0, "amplitude": 0.0,
                      "omega": 1.0}
        wall["g"] = _merge_section(f"{name}.g", g_defaults, wall["g"])
    return wall


def _validate_bcs(bcs, ndim: int) -> dict:
    if not isinstance(bcs, Mapping):
        raise ConfigError("bcs must be an object keyed x1..x{ndim}")
    want_keys = {f"x{d + 1}" for d in range(ndim)}
    unknown = set(bcs) - want_keys
    if unknown:
        raise ConfigError(f"unknown key {sorted(unknown)[0]!r} in section 'bcs'")
    missing = want_keys - set(bcs)
    if missing:
        raise ConfigError(f"missing boundary condition {sorted(missing)[0]!r}")
    out = {}
    for key in sorted(want_keys):
        spec = bcs[key]
        if spec == PERIODIC:
            out[key] = PERIODIC
        elif isinstance(spec, Mapping) and set(spec) <= {"lo", "hi"}:
            if set(spec) != {"lo", "hi"}:
                raise ConfigError(f"bcs.{key} must give both 'lo' and 'hi'")
            out[key] = {side: _validate_wall(f"bcs.{key}.{side}", spec[side])
                        for side in ("lo", "hi")}
        elif isinstance(spec, Mapping):
            wall = _validate_wall(f"bcs.{key}", spec)
            out[key] = {"lo": wall, "hi": wall}
        else:
            raise ConfigError(f"bcs.{key} must be 'periodic' or wall objects")
    return out


def wall_from_config(wall_cfg: Mapping[str, Any], ndim: int) -> WallSpec:
    u_wall = wall_cfg["u_wall"]
    u_wall = np.zeros(ndim) if u_wall is None else np.asarray(u_wall, float)
    if u_wall.size != ndim:
        raise ConfigError("u_wall must have ndim components")
    g = None
    if wall_cfg["g"] is not None:
        g_cfg = dict(wall_cfg["g"])
        kind = g_cfg.pop("kind")
        if kind == "zero":
            g = make_heat_flux("zero")
        elif kind == "constant":
            g = make_heat_flux("constant", value=g_cfg["value"])
        elif kind == "sinusoidal":
            g = make_heat_flux("sinusoidal", amplitude=g_cfg["amplitude"],
                               omega=g_cfg["omega"])
        else:
            raise ConfigError(f"unknown heat flux kind {kind!r}")
    try:
        return WallSpec(kind=wall_cfg["kind"], u_wall=u_wall, g=g,
                        t_wall=wall_cfg["t_wall"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def bcs_from_config(bcs_cfg: Mapping[str, Any], ndim: int) -> dict:
    out = {}
    for d in range(ndim):
        spec = bcs_cfg[f"x{d + 1}"]
        if spec == PERIODIC:
            out[d] = PERIODIC
        else:
            out[d] = {side: wall_from_config(spec[side], ndim)
                      for side in ("lo", "hi")}
    return out


def load_config(path) -> dict:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return resolve_config(raw)
