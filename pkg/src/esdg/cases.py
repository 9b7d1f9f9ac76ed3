r"""Packaged verification cases and the generic run driver.

* Manufactured-solution channel: steady plane channel flow with the
  annular-duct axial profile (quadratic plus logarithm, outside polynomial
  space) imposed through an analytic source; measures L1/L2/Linf convergence
  of the axial velocity against the exact field on nested grids.
* Entropy-conservation audit: square box with no-slip walls and a moving
  lid, entropy-conservative coupling and zero interior penalty; verifies
  that dS/dt and DT cancel to machine precision step after step.
* Blast wave: 1D high-density pulse between no-slip adiabatic walls, run
  with both the mass-diffusive and the classical Navier-Stokes closures on
  nested grids; compares peak densities and grid-convergence behavior.
* Free run: integrate any validated config.

Every case writes a metadata JSON with the fully resolved configuration and
a deterministic build identifier, plus CSV artifacts with 17-significant-
digit floats.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .config import bcs_from_config, resolve_config
from .diagnostics import BudgetTrace, conserved_totals, discrete_norms
from .gas import GasModel, cons_to_prim, sound_speed
from .grid import PERIODIC, Grid, build_grid, describe_grid, project_function
from .semidisc import SemidiscreteOptions, make_rhs, rhs
from .timeint import IntegratorConfig, integrate
from .wallbc import WallSpec

# Manufactured channel geometry: outer coordinate 0.5, radius ratio 4.
MMS_R1 = 0.125
MMS_R2 = 0.5

_ADV_CFL = 0.7
_DIFF_CFL = 0.55


@dataclass
class CaseResult:
    name: str
    passed: bool
    summary: dict
    artifacts: list = field(default_factory=list)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_metadata(out_dir: str, name: str, payload: dict) -> str:
    os.makedirs(out_dir, exist_ok=True)
    blob = json.dumps(payload, sort_keys=True, default=str)
    build_id = hashlib.sha1((blob + __version__).encode()).hexdigest()[:12]
    meta = {"case": name, "package_version": __version__,
            "build_id": build_id, **payload}
    path = os.path.join(out_dir, f"{name}_metadata.json")
    with open(path, "w") as fh:
        json.dump(meta, fh, indent=2, default=str)
    return path


def stable_dt_cap(grid: Grid, gas: GasModel, q: np.ndarray, model: str) -> float:
    """Explicit-step cap from advective and diffusive node-spacing scales.

    The adaptive error controller remains the authority; this cap only keeps
    it from probing far beyond the stability boundary in diffusion-limited
    runs.
    """
    v = cons_to_prim(gas, q)
    c = sound_speed(gas, v)
    rho_min = float(np.min(v[..., 0]))
    if model == "cns1d":
        diff = max(4.0 / 3.0 * gas.mu / rho_min,
                   gas.kappa / (rho_min * gas.c_v))
    else:
        diff = gas.alpha * gas.mu / rho_min + gas.beta_diff
    spacing = float(np.min(np.diff(grid.ops.nodes)))
    cap = np.inf
    for d in range(grid.ndim):
        dx = grid.h[d] * spacing / 2.0
        smax = float(np.max(np.abs(v[..., 1 + d]) + c))
        cap = min(cap, _ADV_CFL * dx / smax)
        if diff > 0.0:
            cap = min(cap, _DIFF_CFL * dx * dx / diff)
    return cap


def _integrate_chunked(grid, gas, opts, q0, *, t_end, rtol=1e-8, atol=1e-8,
                       source=None, chunk=None, steady_tol=None,
                       observers=()):
    """Integrate with periodic dt-cap refresh and optional steady-state exit."""
    f = make_rhs(grid, gas, opts, source=source)
    t = 0.0
    q = q0
    chunk = chunk if chunk is not None else t_end
    n_accepted = n_rejected = n_rhs = 0
    while t < t_end * (1.0 - 1e-12):
        t_next = min(t_end, t + chunk)
        cap = stable_dt_cap(grid, gas, q, opts.model)
        cfg = IntegratorConfig(t_start=t, t_end=t_next, rtol=rtol, atol=atol,
                               dt_init=cap, dt_max=cap)
        res = integrate(f, q, cfg, observers=observers)
        t, q = res.t, res.q
        n_accepted += res.n_accepted
        n_rejected += res.n_rejected
        n_rhs += res.n_rhs
        if steady_tol is not None:
            resid = float(np.max(np.abs(f(q, t))))
            if resid < steady_tol:
                break
    return q, t, {"accepted": n_accepted, "rejected": n_rejected,
                  "rhs_evaluations": n_rhs}


# ---------------------------------------------------------------------------
# Manufactured-solution channel
# ---------------------------------------------------------------------------

def mms_axial_velocity(x2: np.ndarray) -> np.ndarray:
    """Steady axial profile: vanishes at both channel coordinates."""
    k = (MMS_R2**2 - MMS_R1**2) / np.log(MMS_R2 / MMS_R1)
    return 0.25 * ((MMS_R1**2 - x2**2) + k * np.log(x2 / MMS_R1))


def mms_axial_velocity_derivatives(x2: np.ndarray):
    k = (MMS_R2**2 - MMS_R1**2) / np.log(MMS_R2 / MMS_R1)
    d1 = 0.25 * (-2.0 * x2 + k / x2)
    d2 = 0.25 * (-2.0 - k / x2**2)
    return d1, d2


def mms_exact_primitive(x: np.ndarray) -> np.ndarray:
    """(rho, U1, U2, T) = (1, U1(x2), 0, 1)."""
    out = np.zeros(x.shape[:-1] + (4,))
    out[..., 0] = 1.0
    out[..., 1] = mms_axial_velocity(x[..., 1])
    out[..., 3] = 1.0
    return out


def mms_source(gas: GasModel, x2: np.ndarray) -> np.ndarray:
    """Analytic source making the exact field steady, per node.

    Only the axial momentum and energy components are nonzero:
    (0, -alpha mu U1'', 0, -alpha mu (U1'^2 + U1 U1'')).
    """
    if np.any(x2 < MMS_R1 - 1e-12) or np.any(x2 > MMS_R2 + 1e-12):
        raise ValueError("coordinate outside the channel")
    u = mms_axial_velocity(x2)
    d1, d2 = mms_axial_velocity_derivatives(x2)
    src = np.zeros(x2.shape + (4,))
    src[..., 1] = -gas.alpha * gas.mu * d2
    src[..., 3] = -gas.alpha * gas.mu * (d1 * d1 + u * d2)
    return src


def _mms_grid(p: int, n_row: int, wall: WallSpec) -> Grid:
    return build_grid(ndim=2, p=p, elems=(2, n_row),
                      box=[(0.0, MMS_R2 - MMS_R1), (MMS_R1, MMS_R2)],
                      bcs={0: PERIODIC, 1: wall})


def run_mms_case(p: int, n_row: int, *, re=1.0, ma=1e-3, t_end=40.0,
                 steady_tol=1e-12, rtol=1e-8, atol=1e-8):
    """One channel resolution: returns (L1, L2, Linf) of the U1 error."""
    gas = GasModel.from_similarity(Re=re, Ma=ma)
    wall = WallSpec(kind="adiabatic", u_wall=np.zeros(2))
    grid = _mms_grid(p, n_row, wall)
    x = grid.coords()
    src = mms_source(gas, x[..., 1])
    q0 = project_function(grid, gas, mms_exact_primitive)
    opts = SemidiscreteOptions(model="eulerian", inviscid_interface="es",
                               beta0_wall=1.0)
    q, t, stats = _integrate_chunked(grid, gas, opts, q0, t_end=t_end,
                                     rtol=rtol, atol=atol, source=src,
                                     chunk=max(t_end / 10.0, 1.0),
                                     steady_tol=steady_tol)
    v = cons_to_prim(gas, q)
    u_exact = mms_axial_velocity(x[..., 1])
    norms = discrete_norms(grid, v[..., 1], u_exact)
    return norms, t, stats


def run_mms_convergence(p: int, grids=(4, 8, 16, 32), out_dir="out", *,
                        re=1.0, ma=1e-3, t_end=40.0, rtol=1e-8,
                        atol=1e-8) -> CaseResult:
    """Nested-grid convergence study; writes the rate table CSV."""
    rows = []
    prev = None
    for n_row in grids:
        norms, t_final, stats = run_mms_case(p, n_row, re=re, ma=ma,
                                             t_end=t_end, rtol=rtol, atol=atol)
        rates = [np.log2(norms[i] / prev[i]) if prev is not None else None
                 for i in range(3)]
        rows.append({"grid": n_row, "L1": norms[0], "rate1": rates[0],
                     "L2": norms[1], "rate2": rates[1],
                     "Linf": norms[2], "rateInf": rates[2],
                     "t_final": t_final, **stats})
        prev = norms

    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, f"mms_p{p}.csv")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("grid", "L1", "rate1", "L2", "rate2", "Linf",
                         "rateInf"))
        for row in rows:
            writer.writerow([row["grid"]]
                            + [_fmt(row[k]) if row[k] is not None else ""
                               for k in ("L1", "rate1", "L2", "rate2", "Linf",
                                         "rateInf")])

    finest_rate = rows[-1]["rate2"] if len(rows) > 1 else None
    passed = finest_rate is not None and -finest_rate >= p + 0.6
    meta = write_metadata(out_dir, f"mms_p{p}", {
        "p": p, "grids": list(grids), "Re": re, "Ma": ma, "t_end": t_end,
        "rows": rows, "finest_l2_rate": finest_rate,
        "pass_threshold": -(p + 0.6)})
    return CaseResult(name=f"mms_p{p}", passed=bool(passed),
                      summary={"rows": rows, "finest_l2_rate": finest_rate},
                      artifacts=[path, meta])


# ---------------------------------------------------------------------------
# Entropy-conservation audit (moving-lid box)
# ---------------------------------------------------------------------------

def run_entropy_audit(out_dir="out", *, p=5, elems=8, n_steps=1000,
                      beta0=0.0, re=1.0, lid_ma=0.05, gamma=1.4,
                      rtol=1e-8, atol=1e-8) -> CaseResult:
    """Moving-lid box with entropy-conservative coupling; budget per step."""
    gas = GasModel.from_similarity(gamma=gamma, Re=re, Ma=lid_ma)
    u_lid = gas.reference_velocity(lid_ma)
    static = WallSpec(kind="adiabatic", u_wall=np.zeros(2))
    lid = WallSpec(kind="adiabatic", u_wall=np.array([u_lid, 0.0]))
    grid = build_grid(ndim=2, p=p, elems=(elems, elems),
                      box=[(0.0, 1.0), (0.0, 1.0)],
                      bcs={0: static, 1: {"lo": static, "hi": lid}})
    opts = SemidiscreteOptions(model="eulerian", inviscid_interface="ec",
                               beta0_interface=beta0, beta0_wall=beta0)

    def uniform_rest(x):
        out = np.zeros(x.shape[:-1] + (4,))
        out[..., 0] = 1.0
        out[..., 3] = 1.0
        return out

    q0 = project_function(grid, gas, uniform_rest)
    trace = BudgetTrace()

    def observe(i, t, q):
        _, budget = rhs(grid, gas, q, t, opts, want_budget=True)
        trace.record(t, budget)

    f = make_rhs(grid, gas, opts)
    cap = stable_dt_cap(grid, gas, q0, opts.model)
    # Horizon far beyond n_steps * cap; the accepted-step counter stops us.
    cfg = IntegratorConfig(t_start=0.0, t_end=10.0 * n_steps * cap,
                           rtol=rtol, atol=atol, dt_init=cap, dt_max=cap,
                           stop_after_accepted=n_steps)
    res = integrate(f, q0, cfg, observers=[observe])

    os.makedirs(out_dir, exist_ok=True)
    trace_path = os.path.join(out_dir, "entropy_audit_budget.csv")
    trace.write_csv(trace_path)

    defect = trace.max_conservation_defect()
    if beta0 == 0.0:
        passed = defect <= 1e-11
    else:
        # Stability, not conservation: entropy rate plus dissipation stays
        # nonpositive (up to the identity roundoff scale).
        worst = max(row[1] + row[2] for row in trace.rows)
        passed = worst <= 1e-11
    meta = write_metadata(out_dir, "entropy_audit", {
        "p": p, "elems": elems, "n_steps": n_steps, "beta0": beta0,
        "Re": re, "lid_Ma": lid_ma, "t_final": res.t,
        "accepted": res.n_accepted, "rejected": res.n_rejected,
        "max_conservation_defect": defect, "grid": describe_grid(grid),
        "verdict": "PASS" if passed else "FAIL"})
    return CaseResult(name="entropy_audit", passed=bool(passed),
                      summary={"max_conservation_defect": defect,
                               "steps": res.n_accepted, "t_final": res.t},
                      artifacts=[trace_path, meta])


# ---------------------------------------------------------------------------
# 1D blast wave, mass-diffusive vs classical closures
# ---------------------------------------------------------------------------

def blast_initial_primitive(gamma: float, amplitude=9.0, width=0.01):
    def ic(x):
        out = np.zeros(x.shape[:-1] + (3,))
        rho = 1.0 + amplitude * np.exp(-((x[..., 0] / width) ** 2))
        out[..., 0] = rho
        out[..., 2] = rho ** (gamma - 1.0)  # p = rho^gamma, R = 1
        return out

    return ic


def _element_mean_profile(grid, values):
    """Per-element mean density and center coordinate (monotone abscissae)."""
    x = grid.coords()[..., 0]
    return x.mean(axis=1), values.mean(axis=1)


def run_blast_wave(out_dir="out", *, grids=(2048, 4096, 8192), re=10.0,
                   ma=0.07, p=1, t_end=0.01, amplitude=9.0, width=0.01,
                   models=("eulerian", "cns1d"), rtol=1e-8,
                   atol=1e-8) -> CaseResult:
    """Density-pulse comparison between the two closures on nested grids."""
    gas = GasModel.from_similarity(Re=re, Ma=ma)
    wall = WallSpec(kind="adiabatic", u_wall=np.zeros(1))
    sample_x = np.linspace(-0.5, 0.5, 4097)
    os.makedirs(out_dir, exist_ok=True)

    profiles: dict = {}
    report: dict = {"models": {}}
    artifacts = []
    for model in models:
        opts = SemidiscreteOptions(model=model, inviscid_interface="es",
                                   beta0_wall=1.0)
        entry = {"grids": [], "peaks": [], "peak_locations": [],
                 "boundary_defect": [], "intergrid_l2": []}
        prev_sample = None
        for n in grids:
            grid = build_grid(ndim=1, p=p, elems=(n,), box=[(-0.5, 0.5)],
                              bcs={0: wall})
            q0 = project_function(grid, gas,
                                  blast_initial_primitive(gas.gamma,
                                                          amplitude, width))
            q, _, stats = _integrate_chunked(grid, gas, opts, q0,
                                             t_end=t_end, rtol=rtol,
                                             atol=atol, chunk=t_end / 5.0)
            rho = cons_to_prim(gas, q)[..., 0]
            x = grid.coords()[..., 0]
            flat_x = x.reshape(-1)
            flat_rho = rho.reshape(-1)
            imax = int(np.argmax(flat_rho))
            xc, rho_mean = _element_mean_profile(grid, rho)
            sample = np.interp(sample_x, xc, rho_mean)

            entry["grids"].append(n)
            entry["peaks"].append(float(flat_rho[imax]))
            entry["peak_locations"].append(float(flat_x[imax]))
            entry["boundary_defect"].append(_boundary_monotonicity_defect(
                flat_x, flat_rho))
            if prev_sample is not None:
                diff = sample - prev_sample
                entry["intergrid_l2"].append(float(np.sqrt(np.mean(diff**2))))
            prev_sample = sample
            profiles[(model, n)] = (xc, rho_mean)

            path = os.path.join(out_dir, f"blast_{model}_n{n}.csv")
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(("x", "rho"))
                for xi, ri in zip(xc, rho_mean):
                    writer.writerow((_fmt(xi), _fmt(ri)))
            artifacts.append(path)
        report["models"][model] = entry

    checks = {}
    if len(models) == 2 and len(grids) >= 2:
        e = report["models"][models[0]]
        c = report["models"][models[1]]
        checks["peak_ordering_finest"] = bool(e["peaks"][-1] < c["peaks"][-1])
        checks["peak_ordering_second_finest"] = bool(
            e["peaks"][-2] < c["peaks"][-2])
    for model in models:
        entry = report["models"][model]
        # A genuine wall anomaly (density dissipating at the boundary) is
        # O(1e-2) or larger; tens of thousands of steps leave roundoff
        # wiggle up to ~1e-8 in the exactly-flat far field.
        checks[f"{model}_boundary_clean"] = bool(
            max(entry["boundary_defect"]) <= 1e-6)
        diffs = entry["intergrid_l2"]
        checks[f"{model}_diffs_nonincreasing"] = bool(
            all(diffs[i + 1] <= diffs[i] * (1.0 + 1e-12)
                for i in range(len(diffs) - 1)))
    report["checks"] = checks
    passed = all(checks.values()) if checks else False

    meta = write_metadata(out_dir, "blast", {
        "grids": list(grids), "Re": re, "Ma": ma, "p": p, "t_end": t_end,
        "amplitude": amplitude, "width": width, "models": list(models),
        "report": report, "verdict": "PASS" if passed else "FAIL"})
    artifacts.append(meta)
    return CaseResult(name="blast", passed=bool(passed), summary=report,
                      artifacts=artifacts)


def _boundary_monotonicity_defect(x_flat, rho_flat, n_nodes=5) -> float:
    """Deviation from monotonicity in the nodes nearest each wall.

    Total variation minus net variation over the first/last ``n_nodes`` nodal
    values; zero for a monotone trace, and O(roundoff) for the unperturbed
    far field.
    """
    order = np.argsort(x_flat, kind="stable")
    trace = rho_flat[order]
    worst = 0.0
    for seg in (trace[:n_nodes], trace[-n_nodes:]):
        d = np.diff(seg)
        tv = float(np.sum(np.abs(d)))
        worst = max(worst, tv - abs(float(np.sum(d))))
    return worst


# ---------------------------------------------------------------------------
# Config-driven free run
# ---------------------------------------------------------------------------

def run_from_config(cfg: dict) -> CaseResult:
    """Integrate a fully specified configuration and dump the final state."""
    cfg = resolve_config(cfg)
    ndim = cfg["ndim"]
    gas = GasModel.from_similarity(gamma=cfg["gas"]["gamma"],
                                   Re=cfg["gas"]["Re"], Ma=cfg["gas"]["Ma"],
                                   alpha=cfg["gas"]["alpha"],
                                   Pr=cfg["gas"]["Pr"])
    grid = build_grid(ndim=ndim, p=cfg["p"], elems=cfg["elements"],
                      box=[tuple(b) for b in cfg["box"]],
                      bcs=bcs_from_config(cfg["bcs"], ndim))
    model = "cns1d" if cfg["model"] == "cns" else "eulerian"
    disc = cfg["discretization"]
    opts = SemidiscreteOptions(model=model,
                               inviscid_interface=disc["inviscid_interface"],
                               beta0_interface=disc["beta0_interface"],
                               beta0_wall=disc["beta0_wall"])

    ic = cfg["ic"]
    if ic["kind"] == "uniform":
        state = np.asarray(ic["state"], dtype=float)

        def f_ic(x):
            return np.broadcast_to(state, x.shape[:-1] + state.shape).copy()
    else:
        if ndim != 1:
            raise ValueError("density_pulse initial condition is 1D")
        f_ic = blast_initial_primitive(gas.gamma, ic["amplitude"], ic["width"])

    q0 = project_function(grid, gas, f_ic)
    integ = cfg["integrator"]
    trace = BudgetTrace()

    def observe(i, t, q):
        _, budget = rhs(grid, gas, q, t, opts, want_budget=True)
        trace.record(t, budget)

    f = make_rhs(grid, gas, opts)
    cap = stable_dt_cap(grid, gas, q0, opts.model)
    dt_max = integ["dt_max"] if integ["dt_max"] is not None else cap
    dt_init = integ["dt_init"] if integ["dt_init"] is not None else dt_max
    int_cfg = IntegratorConfig(t_start=0.0, t_end=integ["t_end"],
                               rtol=integ["rtol"], atol=integ["atol"],
                               dt_init=dt_init, dt_max=dt_max)
    res = integrate(f, q0, int_cfg, observers=[observe])

    out_dir = cfg["output_dir"]
    os.makedirs(out_dir, exist_ok=True)
    state_path = os.path.join(out_dir, "final_state.csv")
    x = grid.coords().reshape(-1, ndim)
    v = cons_to_prim(gas, res.q).reshape(-1, grid.nfields)
    with open(state_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{d + 1}" for d in range(ndim)]
                        + ["rho"] + [f"u{d + 1}" for d in range(ndim)] + ["T"])
        for row in np.hstack([x, v]):
            writer.writerow([_fmt(val) for val in row])
    trace_path = os.path.join(out_dir, "budget.csv")
    trace.write_csv(trace_path)
    totals = conserved_totals(grid, res.q)
    meta = write_metadata(out_dir, "run", {
        "config": cfg, "grid": describe_grid(grid), "t_final": res.t,
        "accepted": res.n_accepted, "rejected": res.n_rejected,
        "conserved_totals": [float(x) for x in totals],
        "max_budget_identity_defect": trace.max_identity_defect()})
    return CaseResult(name="run", passed=True,
                      summary={"t_final": res.t, "accepted": res.n_accepted},
                      artifacts=[state_path, trace_path, meta])


# ---------------------------------------------------------------------------
# Self test
# ---------------------------------------------------------------------------

def selftest(verbose: bool = True) -> bool:
    """Fast in-process property suite across all modules."""
    from .fluxes import ec_two_point_flux, es_two_point_flux
    from .gas import entropy_scalars, entropy_vars, prim_to_cons
    from .sbp import build_sbp

    checks = []

    def check(name, fn):
        t0 = time.perf_counter()
        try:
            fn()
            checks.append((name, True, f"{time.perf_counter() - t0:.2f}s"))
        except AssertionError as exc:
            checks.append((name, False, str(exc)))

    def sbp_props():
        for p in range(1, 8):
            op = build_sbp(p)
            assert np.max(np.abs(op.q + op.q.T - op.b)) <= 1e-14
            assert np.max(np.abs(op.delta @ op.i_stof - op.q)) <= 1e-14
            for j in range(p + 1):
                want = j * op.nodes ** (j - 1) if j else np.zeros(p + 1)
                assert np.max(np.abs(op.d @ op.nodes**j - want)) <= 1e-12

    def thermo_props():
        gas = GasModel(gamma=1.4, R=1.0, mu=0.1)
        rng = np.random.default_rng(0)
        v = np.empty((500, 4))
        v[:, 0] = 0.5 + rng.random(500)
        v[:, 1:3] = rng.uniform(-1, 1, (500, 2))
        v[:, 3] = 0.5 + rng.random(500)
        v2 = cons_to_prim(gas, prim_to_cons(gas, v))
        assert np.max(np.abs(v2 - v)) <= 1e-13
        w = entropy_vars(gas, v)
        _, _, f_ent, psi = entropy_scalars(gas, v)
        from .fluxes import inviscid_flux
        for axis in range(2):
            fi = inviscid_flux(gas, v, axis)
            resid = np.sum(w * fi, 1) - f_ent[:, axis] - psi[:, axis]
            assert np.max(np.abs(resid)) <= 1e-11

    def flux_props():
        gas = GasModel(gamma=1.4, R=1.0, mu=0.1)
        rng = np.random.default_rng(1)
        v_l = np.empty((2000, 3))
        v_r = np.empty((2000, 3))
        for v in (v_l, v_r):
            v[:, 0] = 0.5 + rng.random(2000)
            v[:, 1] = rng.uniform(-1, 1, 2000)
            v[:, 2] = 0.5 + rng.random(2000)
        w_l, w_r = entropy_vars(gas, v_l), entropy_vars(gas, v_r)
        _, _, _, psi_l = entropy_scalars(gas, v_l)
        _, _, _, psi_r = entropy_scalars(gas, v_r)
        f = ec_two_point_flux(gas, v_l, v_r, 0)
        resid = np.sum((w_r - w_l) * f, 1) - (psi_r[:, 0] - psi_l[:, 0])
        assert np.max(np.abs(resid)) <= 1e-12 * np.max(
            1.0 + np.abs(psi_r[:, 0] - psi_l[:, 0]))
        f_es = es_two_point_flux(gas, v_l, v_r, 0)
        prod = np.sum((w_r - w_l) * f_es, 1) - (psi_r[:, 0] - psi_l[:, 0])
        assert np.max(prod) <= 1e-12

    def budget_props():
        gas = GasModel(gamma=1.4, R=1.0, mu=0.05)
        rng = np.random.default_rng(2)
        wall2 = WallSpec(kind="adiabatic", u_wall=np.zeros(2))
        lid = WallSpec(kind="adiabatic", u_wall=np.array([0.3, 0.0]))
        grid = build_grid(ndim=2, p=3, elems=(3, 3), box=[(0, 1), (0, 1)],
                          bcs={0: wall2, 1: {"lo": wall2, "hi": lid}})
        shape = (grid.nelems,) + (grid.ops.n,) * 2
        v = np.empty(shape + (4,))
        v[..., 0] = 1.0 + 0.3 * rng.random(shape)
        v[..., 3] = 1.0 + 0.3 * rng.random(shape)
        v[..., 1:3] = 0.3 * rng.standard_normal(shape + (2,))
        q = prim_to_cons(gas, v)
        for beta, mode in ((0.0, "ec"), (1.0, "es")):
            opts = SemidiscreteOptions(model="eulerian",
                                       inviscid_interface=mode,
                                       beta0_interface=beta, beta0_wall=beta)
            _, budget = rhs(grid, gas, q, 0.0, opts, want_budget=True)
            assert abs(budget.residual) <= 1e-11 * budget.scale
            if beta == 0.0:
                assert abs(budget.xi) <= 1e-12 * budget.scale

    def integrator_props():
        cfg = IntegratorConfig(t_end=1.0, dt_init=0.25, adaptive=False)
        res = integrate(lambda q, t: np.array([3.0 * t**2]),
                        np.array([0.0]), cfg)
        assert abs(res.q[0] - 1.0) <= 1e-13

    check("sbp_operator_invariants", sbp_props)
    check("thermo_transform_identities", thermo_props)
    check("two_point_flux_contracts", flux_props)
    check("semidiscrete_entropy_identity", budget_props)
    check("integrator_exactness", integrator_props)

    ok = all(passed for _, passed, _ in checks)
    if verbose:
        for name, passed, detail in checks:
            print(f"{'PASS' if passed else 'FAIL'} {name} ({detail})")
    return ok
