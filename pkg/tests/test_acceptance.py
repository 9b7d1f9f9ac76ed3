"""Acceptance gate: the ten verification criteria at their stated tolerances.

Each test prints one PASS/FAIL line (visible with ``pytest -s`` or in the
captured output).  Criteria 7, 8, and 10 run the scaled-down verification
cases end to end and are marked slow; they still run by default.
"""

import numpy as np
import pytest

from _utils import random_primitives
from esdg.cases import (run_blast_wave, run_entropy_audit, run_mms_convergence,
                        stable_dt_cap)
from esdg.diagnostics import BudgetTrace
from esdg.fluxes import ec_two_point_flux, es_two_point_flux, inviscid_flux
from esdg.gas import (GasModel, dqdw, entropy_function, entropy_scalars,
                      entropy_to_prim, entropy_vars, prim_to_cons)
from esdg.grid import PERIODIC, build_grid, project_function
from esdg.sbp import build_sbp
from esdg.semidisc import SemidiscreteOptions, make_rhs, rhs
from esdg.timeint import IntegratorConfig, integrate
from esdg.wallbc import WallSpec, ip_term, make_heat_flux

GAS = GasModel(gamma=1.4, R=1.0, mu=0.1)


def _report(criterion, passed, detail):
    print(f"ACCEPTANCE {criterion}: {'PASS' if passed else 'FAIL'} ({detail})")
    assert passed, f"criterion {criterion}: {detail}"


def test_criterion_1_sbp_property_suite():
    # p = 1..7: degree exactness <= 1e-12, Q+Q^T-B <= 1e-14,
    # Q = delta  i_stof <= 1e-14.  Runtime < 1 s.
    worst = {"exact": 0.0, "sbp": 0.0, "tele": 0.0}
    for p in range(1, 8):
        op = build_sbp(p)
        for j in range(p + 1):
            want = j * op.nodes ** (j - 1) if j else np.zeros(p + 1)
            worst["exact"] = max(worst["exact"],
                                 np.max(np.abs(op.d @ op.nodes**j - want)))
        worst["sbp"] = max(worst["sbp"], np.max(np.abs(op.q + op.q.T - op.b)))
        worst["tele"] = max(worst["tele"],
                            np.max(np.abs(op.delta @ op.i_stof - op.q)))
    ok = (worst["exact"] <= 1e-12 and worst["sbp"] <= 1e-14
          and worst["tele"] <= 1e-14)
    _report(1, ok, f"degree-exactness {worst['exact']:.2e}, "
                   f"SBP defect {worst['sbp']:.2e}, "
                   f"telescoping {worst['tele']:.2e}")


def test_criterion_2_transform_oracles():
    # w vs FD of S(q); dq/dw vs FD Jacobian; dq/dw SPD - 1000 random states,
    # <= 1e-6 rel / positive pivots.  Runtime < 5 s.
    n = 1000
    v = random_primitives(2, n, seed=1)
    q = prim_to_cons(GAS, v)
    w = entropy_vars(GAS, v)
    h = 1e-6
    worst_w = 0.0
    for j in range(4):
        dq = np.zeros_like(q)
        dq[:, j] = h * np.maximum(1.0, np.abs(q[:, j]))
        wj = (entropy_function(GAS, q + dq)
              - entropy_function(GAS, q - dq)) / (2.0 * dq[:, j])
        worst_w = max(worst_w, float(np.max(
            np.abs(wj - w[:, j]) / np.maximum(np.abs(w[:, j]), 1e-3))))

    a = dqdw(GAS, v)
    np.linalg.cholesky(a)  # SPD: raises on a nonpositive pivot
    worst_a = 0.0
    for j in range(4):
        dw = np.zeros_like(w)
        dw[:, j] = h * np.maximum(1.0, np.abs(w[:, j]))
        qp = prim_to_cons(GAS, entropy_to_prim(GAS, w + dw))
        qm = prim_to_cons(GAS, entropy_to_prim(GAS, w - dw))
        col = (qp - qm) / (2.0 * dw[:, j:j + 1])
        denom = np.maximum(np.abs(a[:, :, j]),
                           1e-3 * np.abs(a).max(axis=(1, 2))[:, None])
        worst_a = max(worst_a, float(np.max(np.abs(col - a[:, :, j]) / denom)))

    ok = worst_w <= 1e-6 and worst_a <= 1e-6
    _report(2, ok, f"w-vs-FD {worst_w:.2e}, dqdw-vs-FD {worst_a:.2e}, "
                   "dqdw SPD on 1000 states")


def test_criterion_3_tadmor_and_dissipation():
    # EC Tadmor residual <= 1e-12 scale and ES dissipation sign on 10^4
    # random pairs.  Runtime < 5 s.
    n = 10_000
    v_l = random_primitives(1, n, seed=2)
    v_r = random_primitives(1, n, seed=3)
    w_l, w_r = entropy_vars(GAS, v_l), entropy_vars(GAS, v_r)
    _, _, _, psi_l = entropy_scalars(GAS, v_l)
    _, _, _, psi_r = entropy_scalars(GAS, v_r)
    dpsi = psi_r[:, 0] - psi_l[:, 0]

    f_ec = ec_two_point_flux(GAS, v_l, v_r, 0)
    resid = np.sum((w_r - w_l) * f_ec, axis=1) - dpsi
    tadmor = float(np.max(np.abs(resid) / np.maximum(1.0, np.abs(dpsi))))

    f_es = es_two_point_flux(GAS, v_l, v_r, 0)
    sign = float(np.max(np.sum((w_r - w_l) * f_es, axis=1) - dpsi))

    ok = tadmor <= 1e-12 and sign <= 1e-12
    _report(3, ok, f"Tadmor residual {tadmor:.2e}, ES dissipation max {sign:.2e}")


def test_criterion_4_ip_closed_form():
    # w^T M = -(2 beta alpha mu/(R T^2)) |dU|^2 (|dU|^2 + R T) to <= 1e-12
    # rel on 10^3 random wall states.
    n = 1000
    ndim = 2
    v = random_primitives(ndim, n, seed=4)
    rng = np.random.default_rng(5)
    du = rng.uniform(0.1, 1.5, (n, ndim)) * rng.choice([-1.0, 1.0], (n, ndim))
    w = entropy_vars(GAS, v)
    beta = 2.3
    worst = 0.0
    for i in range(n):
        wall = WallSpec(kind="adiabatic", u_wall=v[i, 1:3] - du[i])
        m = ip_term(GAS, v[i], wall, beta)
        got = float(np.dot(w[i], m))
        du2 = float(np.sum(du[i] ** 2))
        t = v[i, -1]
        want = -(2.0 * beta * GAS.alpha * GAS.mu / (GAS.R * t * t)) \
            * du2 * (du2 + GAS.R * t)
        assert got <= 1e-14
        worst = max(worst, abs(got - want) / abs(want))
    _report(4, worst <= 1e-12, f"closed-form defect {worst:.2e}, sign <= 0")


def _wall(ndim, **kw):
    return WallSpec(u_wall=np.zeros(ndim), **kw)


def _random_q(grid, seed, amp=0.3):
    rng = np.random.default_rng(seed)
    shape = (grid.nelems,) + (grid.ops.n,) * grid.ndim
    v = np.empty(shape + (grid.nfields,))
    v[..., 0] = 1.0 + amp * rng.random(shape)
    v[..., -1] = 1.0 + amp * rng.random(shape)
    v[..., 1:1 + grid.ndim] = amp * rng.standard_normal(shape + (grid.ndim,))
    return prim_to_cons(GAS, v)


def test_criterion_5_freestream_and_conservation():
    # rhs = 0 on uniform states <= 1e-13; periodic conservation
    # <= 1e-12 |f| per component.
    worst_fs = 0.0
    cases = [
        (build_grid(ndim=1, p=3, elems=(4,), box=[(0, 2)], bcs={0: PERIODIC}),
         [1.0, 0.1, 1.0]),
        (build_grid(ndim=1, p=3, elems=(4,), box=[(0, 2)],
                    bcs={0: _wall(1)}), [1.0, 0.0, 1.0]),
        (build_grid(ndim=2, p=2, elems=(3, 2), box=[(0, 1), (0, 1)],
                    bcs={0: PERIODIC, 1: _wall(2)}), [1.0, 0.0, 0.0, 1.0]),
        (build_grid(ndim=2, p=2, elems=(3, 2), box=[(0, 1), (0, 1)],
                    bcs={0: PERIODIC, 1: {"lo": _wall(2), "hi": WallSpec(
                        kind="heatflux", u_wall=np.zeros(2),
                        g=make_heat_flux("zero"))}}), [1.0, 0.0, 0.0, 1.0]),
    ]
    opts = SemidiscreteOptions(model="eulerian")
    for grid, prim in cases:
        prim = np.asarray(prim)
        q = project_function(grid, GAS, lambda x: np.broadcast_to(
            prim, x.shape[:-1] + prim.shape).copy())
        dqdt, _ = rhs(grid, GAS, q, 0.0, opts)
        worst_fs = max(worst_fs, float(np.max(np.abs(dqdt))))

    worst_cons = 0.0
    for ndim in (1, 2):
        if ndim == 1:
            grid = build_grid(ndim=1, p=3, elems=(5,), box=[(0, 2)],
                              bcs={0: PERIODIC})
        else:
            grid = build_grid(ndim=2, p=2, elems=(3, 3),
                              box=[(0, 1), (0, 1.5)],
                              bcs={0: PERIODIC, 1: PERIODIC})
        q = _random_q(grid, seed=6 + ndim)
        dqdt, _ = rhs(grid, GAS, q, 0.0, opts)
        w = grid.volume_weights()
        total = np.sum(w[..., None] * dqdt, axis=tuple(range(dqdt.ndim - 1)))
        f_scale = float(np.max(np.abs(
            inviscid_flux(GAS, random_primitives(ndim, 100, seed=0), 0))))
        worst_cons = max(worst_cons, float(np.max(np.abs(total)))
                         / max(1.0, f_scale))

    ok = worst_fs <= 1e-13 and worst_cons <= 1e-12
    _report(5, ok, f"free-stream {worst_fs:.2e}, conservation {worst_cons:.2e}")


def test_criterion_6_budget_identity_sweep():
    # dS/dt + DT - Xi residual <= 1e-11 scale on random states for
    # {Eulerian 1D/2D, CNS 1D} x {periodic, adiabatic, heatflux} x
    # beta0 in {0, 1}.  Runtime < 30 s.
    heat = dict(kind="heatflux", g=make_heat_flux("constant", value=1e-3))
    worst = 0.0
    n_cases = 0
    for model, ndim in (("eulerian", 1), ("eulerian", 2), ("cns1d", 1)):
        for bc_kind in ("periodic", "adiabatic", "heatflux"):
            for beta0 in (0.0, 1.0):
                for mode in ("ec", "es"):
                    if bc_kind == "periodic":
                        bc = PERIODIC
                    elif bc_kind == "adiabatic":
                        bc = _wall(ndim, kind="adiabatic")
                    else:
                        bc = WallSpec(u_wall=np.zeros(ndim), **heat)
                    if ndim == 1:
                        grid = build_grid(ndim=1, p=3, elems=(4,),
                                          box=[(0, 2)], bcs={0: bc})
                    else:
                        grid = build_grid(ndim=2, p=2, elems=(3, 2),
                                          box=[(0, 1), (0, 1)],
                                          bcs={0: bc, 1: bc})
                    opts = SemidiscreteOptions(model=model,
                                               inviscid_interface=mode,
                                               beta0_interface=beta0,
                                               beta0_wall=beta0)
                    q = _random_q(grid, seed=n_cases)
                    _, budget = rhs(grid, GAS, q, 0.2, opts, want_budget=True)
                    worst = max(worst, abs(budget.residual) / budget.scale)
                    n_cases += 1
    _report(6, worst <= 1e-11,
            f"max identity residual {worst:.2e} over {n_cases} configurations")


@pytest.mark.slow
def test_criterion_7_entropy_conservation_audit(tmp_path):
    # 2D moving-lid box, Re = 1, lid Ma = 0.05, p = 5, 8x8 elements,
    # beta0 = 0, 1000 accepted steps: max |dS/dt + DT|/scale <= 1e-11.
    res = run_entropy_audit(out_dir=str(tmp_path), p=5, elems=8,
                            n_steps=1000, beta0=0.0, re=1.0, lid_ma=0.05)
    defect = res.summary["max_conservation_defect"]
    _report(7, res.passed and defect <= 1e-11,
            f"max |dS/dt + DT|/scale = {defect:.2e} over "
            f"{res.summary['steps']} steps")


@pytest.mark.slow
@pytest.mark.parametrize("p", [2, 3, 4])
def test_criterion_8_mms_convergence(p, tmp_path):
    # 2D channel, Re = 1, Ma = 1e-3, grids 4/8/16/32: L2 rate on the finest
    # pair >= p + 0.6.
    res = run_mms_convergence(p, grids=(4, 8, 16, 32), out_dir=str(tmp_path),
                              re=1.0, ma=1e-3, t_end=40.0)
    rate = res.summary["finest_l2_rate"]
    _report(f"8(p={p})", res.passed,
            f"finest-pair L2 rate {rate:.3f} (need <= -{p + 0.6})")


def test_criterion_9_heatflux_budget():
    # g(t) = 1e-3: dS/dt + DT - face quadrature of g = 0 <= 1e-11 scale at
    # every accepted step over 200 steps.
    heat = WallSpec(kind="heatflux", u_wall=np.zeros(2),
                    g=make_heat_flux("constant", value=1e-3))
    adiab = _wall(2, kind="adiabatic")
    grid = build_grid(ndim=2, p=3, elems=(3, 3), box=[(0, 1), (0, 1)],
                      bcs={0: adiab, 1: {"lo": adiab, "hi": heat}})
    opts = SemidiscreteOptions(model="eulerian", inviscid_interface="ec")
    q0 = _random_q(grid, seed=11, amp=0.05)
    trace = BudgetTrace()

    def observe(i, t, q):
        _, budget = rhs(grid, GAS, q, t, opts, want_budget=True)
        trace.record(t, budget)

    f = make_rhs(grid, GAS, opts)
    cap = stable_dt_cap(grid, GAS, q0, "eulerian")
    cfg = IntegratorConfig(t_start=0.0, t_end=1e9, rtol=1e-8, atol=1e-8,
                           dt_init=cap, dt_max=cap, stop_after_accepted=200)
    integrate(f, q0, cfg, observers=[observe])
    defect = trace.max_data_defect()
    _report(9, len(trace.rows) >= 200 and defect <= 1e-11,
            f"max |dS/dt + DT - sum(P g)|/scale = {defect:.2e} over "
            f"{len(trace.rows) - 1} steps")


@pytest.mark.slow
def test_criterion_10_blast_wave(tmp_path):
    # Re = 10, Ma = 0.07, p = 1, grids 2048/4096/8192: peak ordering on the
    # two finest grids, clean boundaries, non-increasing inter-grid
    # differences.  Curve overlay is out of acceptance.
    res = run_blast_wave(out_dir=str(tmp_path), grids=(2048, 4096, 8192),
                         re=10.0, ma=0.07, p=1, t_end=0.01)
    checks = res.summary["checks"]
    e = res.summary["models"]["eulerian"]
    c = res.summary["models"]["cns1d"]
    _report(10, res.passed,
            f"checks {checks}; peaks eulerian {e['peaks'][-1]:.4f} < "
            f"cns {c['peaks'][-1]:.4f}")
