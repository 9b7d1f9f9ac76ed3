r"""Semidiscrete right-hand side: flux differencing, LDG gradients, SATs.

Per element and direction ``d`` the discretization reads

    dq/dt = -(2/h_d) P^{-1} Delta fbar_d + (2/h_d) D (Lambda Theta_d)
            + (2/h_d) P^{-1} (face penalties),
    Theta_d = (2/h_d) D w + (2/h_d) P^{-1} (face lifts),

where ``fbar`` is the telescoped entropy-conservative flux-point array (its
volume part is equivalently the node update ``r_i = 2 sum_j D_ij f*(q_i, q_j)``)
with its end points replaced by the interface/wall two-point flux, and
``Lambda`` is ``[nu dq/dw]`` for the mass-diffusive model or the classical
1D Navier-Stokes coefficient.  Interior faces and walls share one SAT kernel
(:mod:`esdg.wallbc`); walls differ only in being fed manufactured ghost data.

When asked, the evaluation also assembles the semidiscrete entropy budget
(dS/dt, the interior dissipation DT, and the face term Xi) from exactly the
quantities used in the update, so dS/dt + DT - Xi vanishes identically up to
roundoff for any state: this is the master regression identity.  All
reductions run in a fixed element-major order, making budgets bit-stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .diagnostics import EntropyBudget
from .fluxes import ec_two_point_flux, es_two_point_flux, inviscid_flux
from .gas import GasModel, cons_to_prim, entropy_vars
from .grid import FieldArray, Grid
from .sbp import SbpOperators, apply_along_axis
from .wallbc import (WallSpec, diffusion_matrix, heat_source, ip_penalty,
                     manufactured_theta, mirror_inviscid, mirror_viscous,
                     primitive_gradient_from_theta, q_face_penalties,
                     theta_face_penalty)

MODELS = ("eulerian", "cns1d")
INTERFACE_MODES = ("ec", "es")


@dataclass(frozen=True)
class SemidiscreteOptions:
    """Discretization switches for one run.

    ``inviscid_interface`` selects the two-point flux coupling element faces
    (the volume telescope is always entropy conservative).  ``beta0_*`` are
    the dimensionless interior-penalty strengths; the effective coefficient
    is ``beta0 / h_n``.
    """

    model: str = "eulerian"
    inviscid_interface: str = "ec"
    beta0_interface: float = 0.0
    beta0_wall: float = 0.0

    def __post_init__(self) -> None:
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}")
        if self.inviscid_interface not in INTERFACE_MODES:
            raise ValueError(f"inviscid_interface must be one of {INTERFACE_MODES}")
        for name in ("beta0_interface", "beta0_wall"):
            val = getattr(self, name)
            if not np.isfinite(val) or val < 0.0:
                raise ValueError(f"{name} must be finite and nonnegative")

    def validate_grid(self, grid: Grid) -> None:
        if self.model == "cns1d" and grid.ndim != 1:
            raise ValueError("the classical Navier-Stokes closure is 1D only")


def _face(arr: np.ndarray, axis: int, side: int) -> np.ndarray:
    """Face slice of an element-major nodal array (view)."""
    return arr[(slice(None),) * (1 + axis) + (-1 if side > 0 else 0,)]


def _ix(ids: np.ndarray, axis: int, side: int):
    """Index tuple addressing the face nodes of elements ``ids`` in place."""
    return (ids,) + (slice(None),) * axis + (-1 if side > 0 else 0,)


def _matvec(mat: np.ndarray, vec: np.ndarray) -> np.ndarray:
    return (mat @ vec[..., None])[..., 0]


_PAIR_TABLES: dict = {}


def _pair_table(op: SbpOperators):
    """Upper-triangle pair indices and the (n, npairs) D-weight scatter matrix."""
    table = _PAIR_TABLES.get(op.p)
    if table is None:
        n = op.n
        iu, ju = np.triu_indices(n, k=1)
        m = np.zeros((n, iu.size))
        for k, (a, b) in enumerate(zip(iu, ju)):
            m[a, k] = op.d[a, b]
            m[b, k] = op.d[b, a]
        table = (iu, ju, m, np.diag(op.d).copy())
        _PAIR_TABLES[op.p] = table
    return table


def flux_differenced_divergence(gas: GasModel, v: FieldArray, axis: int,
                                op: SbpOperators, two_point_flux: Callable,
                                diagonal: Optional[FieldArray] = None
                                ) -> FieldArray:
    """Volume flux-differencing node update r_i = 2 sum_j D_ij f*(q_i, q_j).

    Reference-element units (no metric); for the symmetric average flux this
    telescopes back to ``D f``, and for an entropy-conservative flux its
    P-weighted sum reduces to face flux-point differences.  The two-point
    flux must be symmetric in its states: only the upper triangle of pairs is
    evaluated.  ``diagonal`` optionally supplies the nodewise consistent flux
    f*(q_i, q_i) (the physical flux, for any consistent two-point flux).
    """
    vm = np.moveaxis(v, 1 + axis, 1)
    iu, ju, weights, d_diag = _pair_table(op)
    f_pairs = two_point_flux(gas, vm[:, iu], vm[:, ju], axis)
    r = 2.0 * np.einsum("ik,zk...->zi...", weights, f_pairs)
    diag_shape = (1, op.n) + (1,) * (vm.ndim - 2)
    if diagonal is None:
        diagonal = two_point_flux(gas, vm, vm, axis)
    else:
        diagonal = np.moveaxis(diagonal, 1 + axis, 1)
    r += (2.0 * d_diag.reshape(diag_shape)) * diagonal
    return np.moveaxis(r, 1, 1 + axis)


@dataclass
class _WallFace:
    ids: np.ndarray
    spec: WallSpec
    v_loc: np.ndarray
    v_ghost: np.ndarray
    w_loc: np.ndarray
    w_ghost: np.ndarray


def _collect_wall_faces(grid: Grid, gas: GasModel, v: FieldArray,
                        w: FieldArray) -> dict:
    walls = {}
    for axis in range(grid.ndim):
        tables = grid.faces[axis]
        for side, ids in ((-1, tables.boundary_lo), (+1, tables.boundary_hi)):
            if ids.size == 0:
                continue
            spec = grid.wall(axis, side)
            v_loc = _face(v, axis, side)[ids]
            v_ghost = mirror_viscous(v_loc, spec)
            walls[(axis, side)] = _WallFace(
                ids=ids, spec=spec, v_loc=v_loc, v_ghost=v_ghost,
                w_loc=_face(w, axis, side)[ids],
                w_ghost=entropy_vars(gas, v_ghost, check=False))
    return walls


def ldg_gradients(grid: Grid, gas: GasModel, w: FieldArray,
                  walls: dict) -> list[FieldArray]:
    """Entropy-variable gradients Theta_d with interface/wall lifts applied."""
    thetas = []
    p_end = (grid.ops.weights[0], grid.ops.weights[-1])
    for axis in range(grid.ndim):
        scale = 2.0 / grid.h[axis]
        theta = scale * apply_along_axis(grid.ops.d, w, 1 + axis)
        tables = grid.faces[axis]
        if tables.interior_lower.size:
            w_from_lower = _face(w, axis, +1)[tables.interior_lower]
            w_from_upper = _face(w, axis, -1)[tables.interior_upper]
            theta[_ix(tables.interior_lower, axis, +1)] += \
                (scale / p_end[1]) * theta_face_penalty(w_from_lower,
                                                        w_from_upper, +1)
            theta[_ix(tables.interior_upper, axis, -1)] += \
                (scale / p_end[0]) * theta_face_penalty(w_from_upper,
                                                        w_from_lower, -1)
        for side in (-1, +1):
            face = walls.get((axis, side))
            if face is None:
                continue
            pend = p_end[1] if side > 0 else p_end[0]
            theta[_ix(face.ids, axis, side)] += \
                (scale / pend) * theta_face_penalty(face.w_loc, face.w_ghost, side)
        thetas.append(theta)
    return thetas


def _xi_face(gas: GasModel, v_loc, w_loc, f_star, a_loc, a_rem, w_rem,
             sigma: int, axis: int, extra) -> np.ndarray:
    """Per-face-node entropy-rate contribution of one side of a face."""
    psi_n = gas.R * v_loc[..., 0] * v_loc[..., 1 + axis]
    xi = sigma * (psi_n - np.sum(w_loc * f_star, axis=-1))
    xi += sigma * 0.5 * (np.sum(w_loc * a_rem, axis=-1)
                         + np.sum(w_rem * a_loc, axis=-1))
    if extra is not None:
        xi += np.sum(w_loc * extra, axis=-1)
    return xi


def rhs(grid: Grid, gas: GasModel, q: FieldArray, t: float,
        opts: SemidiscreteOptions, want_budget: bool = False):
    """Assemble dq/dt (and optionally the entropy budget) at state ``q``.

    Pure function of (q, t); raises :class:`esdg.gas.NonphysicalStateError`
    naming the offending element/node if the state leaves the physical set.
    """
    opts.validate_grid(grid)
    nf = grid.nfields
    v = cons_to_prim(gas, q)
    w = entropy_vars(gas, v, check=False)
    walls = _collect_wall_faces(grid, gas, v, w)

    thetas = ldg_gradients(grid, gas, w, walls)
    lam = diffusion_matrix(gas, v, opts.model, check=False)
    visc = [_matvec(lam, th) for th in thetas]

    def volume_flux(gas_, v_l, v_r, axis_):
        return ec_two_point_flux(gas_, v_l, v_r, axis_, check=False)

    dqdt = np.zeros_like(q)
    for axis in range(grid.ndim):
        scale = 2.0 / grid.h[axis]
        f_phys = inviscid_flux(gas, v, axis, check=False)
        dqdt += scale * (apply_along_axis(grid.ops.d, visc[axis], 1 + axis)
                         - flux_differenced_divergence(gas, v, axis, grid.ops,
                                                       volume_flux,
                                                       diagonal=f_phys))

    interface_flux = (ec_two_point_flux if opts.inviscid_interface == "ec"
                      else es_two_point_flux)
    xi = 0.0
    boundary_data = 0.0
    p_end = (grid.ops.weights[0], grid.ops.weights[-1])

    for axis in range(grid.ndim):
        scale = 2.0 / grid.h[axis]
        tables = grid.faces[axis]
        face_w = grid.face_weights(axis) if want_budget else None

        if tables.interior_lower.size:
            lo_ids, hi_ids = tables.interior_lower, tables.interior_upper
            v_l = _face(v, axis, +1)[lo_ids]
            v_r = _face(v, axis, -1)[hi_ids]
            w_l = _face(w, axis, +1)[lo_ids]
            w_r = _face(w, axis, -1)[hi_ids]
            a_l = _face(visc[axis], axis, +1)[lo_ids]
            a_r = _face(visc[axis], axis, -1)[hi_ids]
            if opts.inviscid_interface == "es":
                f_star = interface_flux(gas, v_l, v_r, axis, check=False,
                                        w_l=w_l, w_r=w_r)
            else:
                f_star = interface_flux(gas, v_l, v_r, axis, check=False)
            beta = opts.beta0_interface / grid.h[axis]
            ip_l = ip_penalty(gas, v_l, v_r, w_l, w_r, beta, opts.model)
            ip_r = ip_penalty(gas, v_r, v_l, w_r, w_l, beta, opts.model)
            g_l = q_face_penalties(inviscid_flux(gas, v_l, axis, check=False),
                                   f_star, a_l, a_r, +1) + ip_l
            g_r = q_face_penalties(inviscid_flux(gas, v_r, axis, check=False),
                                   f_star, a_r, a_l, -1) + ip_r
            dqdt[_ix(lo_ids, axis, +1)] += (scale / p_end[1]) * g_l
            dqdt[_ix(hi_ids, axis, -1)] += (scale / p_end[0]) * g_r
            if want_budget:
                xi += np.sum(face_w * _xi_face(gas, v_l, w_l, f_star, a_l, a_r,
                                               w_r, +1, axis, ip_l))
                xi += np.sum(face_w * _xi_face(gas, v_r, w_r, f_star, a_r, a_l,
                                               w_l, -1, axis, ip_r))

        for side in (-1, +1):
            face = walls.get((axis, side))
            if face is None:
                continue
            a_loc = _face(visc[axis], axis, side)[face.ids]
            theta_loc = _face(thetas[axis], axis, side)[face.ids]
            f_star = ec_two_point_flux(gas, face.v_loc,
                                       mirror_inviscid(face.v_loc, axis),
                                       axis, check=False)
            pi = primitive_gradient_from_theta(gas, face.v_loc, theta_loc)
            theta_ghost = manufactured_theta(gas, face.v_ghost, pi, opts.model)
            a_ghost = _matvec(diffusion_matrix(gas, face.v_ghost, opts.model,
                                               check=False), theta_ghost)
            beta = opts.beta0_wall / grid.h[axis]
            extra = ip_penalty(gas, face.v_loc, face.v_ghost, face.w_loc,
                               face.w_ghost, beta, opts.model)
            extra = extra + heat_source(face.spec, t, face.v_loc[..., -1], nf)
            g = q_face_penalties(inviscid_flux(gas, face.v_loc, axis,
                                               check=False), f_star,
                                 a_loc, a_ghost, side) + extra
            pend = p_end[1] if side > 0 else p_end[0]
            dqdt[_ix(face.ids, axis, side)] += (scale / pend) * g
            if want_budget:
                xi += np.sum(face_w * _xi_face(gas, face.v_loc, face.w_loc,
                                               f_star, a_loc, a_ghost,
                                               face.w_ghost, side, axis, extra))
                g_t = face.spec.heat_entropy_flux(t)
                if g_t != 0.0:
                    boundary_data += g_t * np.sum(
                        face_w * np.ones(face.ids.shape + face_w.shape))

    if not want_budget:
        return dqdt, None

    vol_w = grid.volume_weights()
    dsdt = float(np.sum(vol_w * np.sum(w * dqdt, axis=-1)))
    dt_diss = 0.0
    for axis in range(grid.ndim):
        dt_diss += float(np.sum(vol_w * np.sum(thetas[axis] * visc[axis],
                                               axis=-1)))
    budget = EntropyBudget(dsdt=dsdt, dt_diss=dt_diss, xi=float(xi),
                           boundary_data=float(boundary_data))
    return dqdt, budget


def make_rhs(grid: Grid, gas: GasModel, opts: SemidiscreteOptions,
             source: Optional[FieldArray] = None) -> Callable:
    """Bind grid/gas/options into an integrator-ready ``f(q, t) -> dq/dt``.

    ``source`` is an optional steady nodal forcing added after the PDE terms
    (used by the manufactured-solution cases; not part of the entropy budget).
    """
    if source is None:
        return lambda q, t: rhs(grid, gas, q, t, opts)[0]
    return lambda q, t: rhs(grid, gas, q, t, opts)[0] + source
