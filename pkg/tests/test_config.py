"""Config schema: strict validation, defaults, wall construction."""

import json

import numpy as np
import pytest

from esdg.config import (ConfigError, bcs_from_config, load_config,
                         resolve_config, wall_from_config)
from esdg.grid import PERIODIC


def minimal_config(**overrides):
    cfg = {
        "case": "run",
        "ndim": 1,
        "p": 2,
        "elements": [4],
        "box": [[0.0, 1.0]],
        "bcs": {"x1": "periodic"},
    }
    cfg.update(overrides)
    return cfg


def test_defaults_recorded():
    cfg = resolve_config(minimal_config())
    assert cfg["gas"]["gamma"] == 1.4
    assert cfg["discretization"]["inviscid_interface"] == "es"
    assert cfg["integrator"]["rtol"] == 1e-8
    assert cfg["ic"]["kind"] == "uniform"
    assert cfg["ic"]["state"] == [1.0, 0.0, 1.0]
    assert cfg["seed"] == 0


@pytest.mark.parametrize("bad,key", [
    ({"cheese": 1}, "cheese"),
    ({"gas": {"Re": 1.0, "viscosity": 2}}, "viscosity"),
    ({"integrator": {"dt": 0.1}}, "dt"),
    ({"bcs": {"x1": "periodic", "x9": "periodic"}}, "x9"),
])
def test_unknown_keys_rejected_by_name(bad, key):
    with pytest.raises(ConfigError, match=key):
        resolve_config(minimal_config(**bad))


@pytest.mark.parametrize("bad", [
    {"case": "warp"},
    {"model": "mhd"},
    {"ndim": 4},
    {"p": 9},
    {"p": 2.5},
    {"elements": [0]},
    {"elements": [2, 2]},
    {"box": [[1.0, 0.0]]},
    {"gas": {"gamma": 0.9}},
    {"gas": {"Re": -1.0}},
    {"discretization": {"inviscid_interface": "roe"}},
    {"discretization": {"beta0_wall": -0.5}},
    {"integrator": {"t_end": 0.0}},
    {"ic": {"kind": "vortex"}},
    {"ic": {"kind": "uniform", "state": [1.0, 0.0]}},
    {"bcs": {"x1": {"lo": {"kind": "adiabatic"}}}},
    {"bcs": {"x1": {"kind": "slippery"}}},
    {"seed": "zero"},
])
def test_invalid_values_rejected(bad):
    with pytest.raises(ConfigError):
        resolve_config(minimal_config(**bad))


def test_wall_construction_from_config():
    cfg = resolve_config(minimal_config(bcs={"x1": {
        "kind": "heatflux",
        "u_wall": [0.1],
        "g": {"kind": "sinusoidal", "amplitude": 2.0, "omega": 0.5},
    }}))
    bcs = bcs_from_config(cfg["bcs"], 1)
    wall = bcs[0]["lo"]
    assert wall.kind == "heatflux"
    assert np.array_equal(wall.u_wall, [0.1])
    assert wall.heat_entropy_flux(np.pi) == pytest.approx(2.0 * np.sin(np.pi / 2))
    assert bcs[0]["hi"] is not None


def test_periodic_passthrough_and_mixed_sides():
    cfg = resolve_config(minimal_config(
        ndim=2, elements=[2, 2], box=[[0, 1], [0, 1]],
        bcs={"x1": "periodic",
             "x2": {"lo": {"kind": "adiabatic"},
                    "hi": {"kind": "adiabatic", "u_wall": [0.2, 0.0]}}}))
    bcs = bcs_from_config(cfg["bcs"], 2)
    assert bcs[0] == PERIODIC
    assert np.array_equal(bcs[1]["hi"].u_wall, [0.2, 0.0])
    assert np.array_equal(bcs[1]["lo"].u_wall, [0.0, 0.0])


def test_wall_from_config_validation():
    with pytest.raises(ConfigError):
        wall_from_config({"kind": "adiabatic", "u_wall": [0.1, 0.2],
                          "t_wall": None, "g": None}, 1)
    with pytest.raises(ConfigError):
        wall_from_config({"kind": "heatflux", "u_wall": None, "t_wall": None,
                          "g": None}, 1)


def test_load_config_errors(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError, match="valid JSON"):
        load_config(bad)
    good = tmp_path / "good.json"
    good.write_text(json.dumps(minimal_config()))
    cfg = load_config(good)
    assert cfg["p"] == 2
