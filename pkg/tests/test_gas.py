"""Thermodynamic transforms against finite-difference and identity oracles."""

import numpy as np
import pytest

from _utils import inviscid_flux_reference, random_primitives
from esdg.gas import (GasModel, NonphysicalStateError, cons_to_prim, dqdv,
                      dqdw, dvdw, dwdv, entropy_function, entropy_scalars,
                      entropy_to_prim, entropy_vars, kinematic_viscosity,
                      prim_to_cons, pressure, sound_speed, specific_entropy)

GAS = GasModel(gamma=1.4, R=1.0, mu=0.1)


def test_gas_model_relations():
    assert GAS.c_p - GAS.c_v == pytest.approx(GAS.R, abs=1e-15)
    assert GAS.c_p / GAS.c_v == pytest.approx(GAS.gamma, abs=1e-15)
    g = GasModel.from_similarity(Re=10.0, Ma=0.07)
    assert g.mu == pytest.approx(0.07 * np.sqrt(1.4) / 10.0)
    assert g.kappa == pytest.approx(g.c_p * g.mu / g.Pr)


@pytest.mark.parametrize("bad", [
    dict(gamma=1.0), dict(R=0.0), dict(mu=-1.0), dict(alpha=0.9),
    dict(alpha=1.5), dict(Pr=0.0),
])
def test_gas_model_validation(bad):
    with pytest.raises(ValueError):
        GasModel(**bad)


def test_rest_state_round_trip():
    q = np.array([1.0, 0.0, 0.0, GAS.c_v])
    v = cons_to_prim(GAS, q)
    assert np.allclose(v, [1.0, 0.0, 0.0, 1.0], atol=1e-15)
    assert pressure(GAS, v) == pytest.approx(GAS.R)
    assert sound_speed(GAS, v) == pytest.approx(np.sqrt(1.4))


@pytest.mark.parametrize("ndim", [1, 2, 3])
def test_round_trip_identity(ndim):
    v = random_primitives(ndim, 1000, seed=ndim)
    v2 = cons_to_prim(GAS, prim_to_cons(GAS, v))
    assert np.max(np.abs(v2 - v) / np.maximum(np.abs(v), 1e-30)) <= 1e-14


def test_nonphysical_states_rejected():
    with pytest.raises(NonphysicalStateError):
        cons_to_prim(GAS, np.array([1.0, 2.0, 0.0, 1.0]))  # rhoE below kinetic
    with pytest.raises(NonphysicalStateError):
        cons_to_prim(GAS, np.array([-1.0, 0.0, 0.0, 1.0]))
    err = None
    q = np.tile([1.0, 0.0, 0.0, GAS.c_v], (4, 1))
    q[2, -1] = -1.0
    try:
        cons_to_prim(GAS, q)
    except NonphysicalStateError as e:
        err = e
    assert err is not None and err.where[0] == 2


def test_entropy_scalars_examples():
    v = np.array([1.0, 0.3, -0.2, 1.0])
    s, S, F, psi = entropy_scalars(GAS, v)
    assert s == pytest.approx(0.0, abs=1e-15)
    assert S == pytest.approx(0.0, abs=1e-15)
    assert np.allclose(F, 0.0, atol=1e-15)
    assert np.allclose(psi, [0.3, -0.2], atol=1e-15)

    v = np.array([2.0, 0.0, 0.0, 3.0])
    _, _, F, psi = entropy_scalars(GAS, v)
    assert np.allclose(F, 0.0, atol=1e-15)
    assert np.allclose(psi, 0.0, atol=1e-15)


@pytest.mark.parametrize("ndim", [1, 2, 3])
def test_entropy_potential_identity(ndim):
    # psi_i = w^T f^I_i - F_i on random states.
    v = random_primitives(ndim, 500, seed=10 + ndim)
    w = entropy_vars(GAS, v)
    _, _, F, psi = entropy_scalars(GAS, v)
    for axis in range(ndim):
        f = inviscid_flux_reference(GAS, v, axis)
        resid = np.sum(w * f, axis=-1) - F[..., axis] - psi[..., axis]
        scale = np.maximum(1.0, np.abs(psi[..., axis]))
        assert np.max(np.abs(resid) / scale) <= 1e-12


def test_entropy_vars_rest_state():
    v = np.array([1.0, 0.0, 0.0, 0.0, 1.0])
    w = entropy_vars(GAS, v)
    assert np.allclose(w, [GAS.c_p, 0.0, 0.0, 0.0, -1.0], atol=1e-15)


@pytest.mark.parametrize("ndim", [1, 2, 3])
def test_entropy_vars_match_fd_gradient_of_entropy(ndim):
    v = random_primitives(ndim, 1000, seed=20 + ndim)
    q = prim_to_cons(GAS, v)
    w = entropy_vars(GAS, v)
    assert np.all(w[..., -1] < 0.0)

    h = 1e-6
    for j in range(ndim + 2):
        dq = np.zeros_like(q)
        dq[:, j] = h * np.maximum(1.0, np.abs(q[:, j]))
        wj = (entropy_function(GAS, q + dq) - entropy_function(GAS, q - dq)) \
            / (2.0 * dq[:, j])
        denom = np.maximum(np.abs(w[:, j]), 1e-3)
        assert np.max(np.abs(wj - w[:, j]) / denom) <= 1e-6


def test_dqdw_rest_entries():
    rho, t = 1.7, 2.3
    v = np.array([rho, 0.0, 0.0, 0.0, t])
    a = dqdw(GAS, v)
    assert a[0, 0] == pytest.approx(rho / GAS.R)
    assert a[0, -1] == pytest.approx(rho * t * GAS.c_v / GAS.R)
    assert a[-1, -1] == pytest.approx(rho * t**2 * GAS.c_p * GAS.c_v / GAS.R)


@pytest.mark.parametrize("ndim", [1, 2, 3])
def test_dqdw_spd_and_symmetric(ndim):
    v = random_primitives(ndim, 1000, seed=30 + ndim)
    a = dqdw(GAS, v)
    asym = np.abs(a - np.swapaxes(a, -1, -2))
    assert np.max(asym / np.maximum(np.abs(a), 1e-30)) <= 1e-13
    np.linalg.cholesky(a)  # raises unless positive-definite


@pytest.mark.parametrize("ndim", [1, 2])
def test_dqdw_matches_fd_jacobian(ndim):
    v = random_primitives(ndim, 200, seed=40 + ndim)
    w = entropy_vars(GAS, v)
    a = dqdw(GAS, v)
    h = 1e-6
    for j in range(ndim + 2):
        dw = np.zeros_like(w)
        dw[:, j] = h * np.maximum(1.0, np.abs(w[:, j]))
        qp = prim_to_cons(GAS, entropy_to_prim(GAS, w + dw))
        qm = prim_to_cons(GAS, entropy_to_prim(GAS, w - dw))
        col = (qp - qm) / (2.0 * dw[:, j:j + 1])
        denom = np.maximum(np.abs(a[:, :, j]), 1e-3 * np.abs(a).max(axis=(1, 2))[:, None])
        assert np.max(np.abs(col - a[:, :, j]) / denom) <= 1e-6


@pytest.mark.parametrize("ndim", [1, 2, 3])
def test_dwdv_matches_fd_and_last_row(ndim):
    v = random_primitives(ndim, 200, seed=50 + ndim)
    m = dwdv(GAS, v)
    assert np.allclose(m[:, -1, :-1], 0.0, atol=0)
    assert np.allclose(m[:, -1, -1], 1.0 / v[:, -1] ** 2, rtol=1e-14)
    h = 1e-7
    for j in range(ndim + 2):
        dv = np.zeros_like(v)
        dv[:, j] = h * np.maximum(1.0, np.abs(v[:, j]))
        col = (entropy_vars(GAS, v + dv) - entropy_vars(GAS, v - dv)) \
            / (2.0 * dv[:, j:j + 1])
        denom = np.maximum(np.abs(m[:, :, j]), 1e-3 * np.abs(m).max(axis=(1, 2))[:, None])
        assert np.max(np.abs(col - m[:, :, j]) / denom) <= 1e-6


@pytest.mark.parametrize("ndim", [1, 2, 3])
def test_jacobian_chain_rules(ndim):
    v = random_primitives(ndim, 300, seed=60 + ndim)
    a = dqdw(GAS, v)
    dw_dv = dwdv(GAS, v)
    dv_dw = dvdw(GAS, v)
    dq_dv = dqdv(GAS, v)

    eye = np.eye(ndim + 2)
    assert np.max(np.abs(dw_dv @ dv_dw - eye)) <= 1e-10
    # (dw/dv)(dv/dq) = (dq/dw)^{-1}, asserted as (dw/dv)(dv/dq)(dq/dw) = I.
    lhs = dw_dv @ np.linalg.inv(dq_dv)
    assert np.max(np.abs(lhs @ a - eye)) <= 1e-10
    # dq/dw = dq/dv dv/dw
    assert np.max(np.abs(dq_dv @ dv_dw - a) / np.maximum(np.abs(a), 1e-8)) <= 1e-11


@pytest.mark.parametrize("ndim", [1, 2, 3])
def test_entropy_transform_bijective(ndim):
    v = random_primitives(ndim, 1000, seed=70 + ndim)
    v2 = entropy_to_prim(GAS, entropy_vars(GAS, v))
    assert np.max(np.abs(v2 - v) / np.maximum(np.abs(v), 1e-30)) <= 1e-13


def test_specific_entropy_and_viscosity():
    v = np.array([2.0, 0.5, 1.0, 3.0])
    s = specific_entropy(GAS, v)
    assert s == pytest.approx(GAS.c_v * np.log(3.0) - GAS.R * np.log(2.0))
    assert kinematic_viscosity(GAS, np.array(2.0)) == pytest.approx(
        GAS.alpha * GAS.mu / 2.0)
