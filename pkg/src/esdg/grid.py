r"""Structured tensor-product Cartesian multi-element grids.

Elements are axis-aligned boxes of uniform size per direction; the reference
element is ``[-1, 1]^ndim`` with LGL solution nodes, so the metric Jacobian is
the constant ``J = prod_d (h_d / 2)`` and the physical derivative along
direction ``d`` is ``(2 / h_d)`` times the reference one.

Nodal fields are numpy arrays of shape ``(K, n_1, ..., n_ndim, nf)`` —
element-major, node indices C-ordered, fields innermost — matching
:class:`esdg.sbp.TensorIndexMap`.  Each boundary face of the domain box is
either periodic (with its partner face) or carries a :class:`esdg.wallbc.WallSpec`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from .gas import GasModel, prim_to_cons
from .sbp import SbpOperators, TensorIndexMap, build_sbp
from .wallbc import WallSpec

PERIODIC = "periodic"
BcValue = Union[str, WallSpec]

#: Nodal state storage: ndarray of shape (K, n_1, ..., n_ndim, nfields).
FieldArray = np.ndarray


@dataclass(frozen=True)
class FaceTables:
    """Per-direction element id lists for face loops (built once)."""

    interior_lower: np.ndarray
    interior_upper: np.ndarray
    boundary_lo: np.ndarray
    boundary_hi: np.ndarray


@dataclass(frozen=True)
class Grid:
    ndim: int
    p: int
    elems: tuple[int, ...]
    lo: tuple[float, ...]
    hi: tuple[float, ...]
    bcs: Mapping[tuple[int, int], BcValue]
    ops: SbpOperators
    tmap: TensorIndexMap
    faces: tuple[FaceTables, ...]

    @property
    def nelems(self) -> int:
        return int(np.prod(self.elems))

    @property
    def nfields(self) -> int:
        return self.ndim + 2

    @property
    def h(self) -> tuple[float, ...]:
        return tuple((self.hi[d] - self.lo[d]) / self.elems[d]
                     for d in range(self.ndim))

    @property
    def jacobian(self) -> float:
        return float(np.prod([hd / 2.0 for hd in self.h]))

    @property
    def volume(self) -> float:
        return float(np.prod([self.hi[d] - self.lo[d] for d in range(self.ndim)]))

    def is_periodic(self, axis: int) -> bool:
        return self.bcs[(axis, -1)] == PERIODIC

    def wall(self, axis: int, side: int) -> WallSpec:
        bc = self.bcs[(axis, side)]
        if not isinstance(bc, WallSpec):
            raise ValueError(f"face (axis={axis}, side={side}) is not a wall")
        return bc

    # -- connectivity ------------------------------------------------------

    def element_multi_index(self, e: int) -> tuple[int, ...]:
        return tuple(int(i) for i in np.unravel_index(e, self.elems))

    def element_flat_index(self, multi: Sequence[int]) -> int:
        return int(np.ravel_multi_index(multi, self.elems))

    def face_neighbor(self, e: int, axis: int, side: int):
        """Neighbor (element, opposite side) across a face, or the BC value."""
        multi = list(self.element_multi_index(e))
        multi[axis] += side
        if 0 <= multi[axis] < self.elems[axis]:
            return self.element_flat_index(multi), -side
        if self.is_periodic(axis):
            multi[axis] %= self.elems[axis]
            return self.element_flat_index(multi), -side
        return self.bcs[(axis, side)]

    # -- geometry ----------------------------------------------------------

    def coords(self) -> np.ndarray:
        """Nodal coordinates, shape (K, n, ..., n, ndim)."""
        axes_1d = []
        for d in range(self.ndim):
            offs = self.lo[d] + self.h[d] * np.arange(self.elems[d])
            axes_1d.append(offs[:, None] + self.h[d] * 0.5 * (self.ops.nodes + 1.0))
        n = self.ops.n
        out = np.empty((*self.elems, *([n] * self.ndim), self.ndim))
        for d in range(self.ndim):
            shape_e = [1] * self.ndim
            shape_e[d] = self.elems[d]
            shape_n = [1] * self.ndim
            shape_n[d] = n
            out[..., d] = axes_1d[d].reshape(*shape_e, *shape_n)
        return out.reshape(self.nelems, *([n] * self.ndim), self.ndim)

    def volume_weights(self) -> np.ndarray:
        """Quadrature-times-Jacobian nodal weights, shape (n, ..., n)."""
        w = self.ops.weights
        out = w
        for _ in range(self.ndim - 1):
            out = np.multiply.outer(out, w)
        return out * self.jacobian

    def face_weights(self, axis: int) -> np.ndarray:
        """Face quadrature weights (transverse P times face Jacobian).

        Shape matches a face slice: the node axes with ``axis`` removed
        (scalar 1.0 in 1D).
        """
        w = self.ops.weights
        out = np.array(1.0)
        for d in range(self.ndim):
            if d == axis:
                continue
            out = np.multiply.outer(out, w) if out.ndim else w.copy()
        jac_face = np.prod([self.h[d] / 2.0 for d in range(self.ndim) if d != axis])
        return out * jac_face


def _normalize_bcs(ndim: int, bcs) -> dict[tuple[int, int], BcValue]:
    out: dict[tuple[int, int], BcValue] = {}
    for axis in range(ndim):
        try:
            spec = bcs[axis]
        except (KeyError, IndexError):
            raise ValueError(f"missing boundary condition for axis {axis}")
        if spec == PERIODIC:
            out[(axis, -1)] = PERIODIC
            out[(axis, +1)] = PERIODIC
        elif isinstance(spec, WallSpec):
            out[(axis, -1)] = spec
            out[(axis, +1)] = spec
        elif isinstance(spec, Mapping):
            for side_name, side in (("lo", -1), ("hi", +1)):
                val = spec[side_name]
                if val == PERIODIC:
                    raise ValueError("periodic faces must pair: tag the whole "
                                     f"axis {axis} as periodic")
                if not isinstance(val, WallSpec):
                    raise ValueError(f"boundary for axis {axis}/{side_name} must "
                                     "be a WallSpec")
                out[(axis, side)] = val
        else:
            raise ValueError(f"bad boundary spec for axis {axis}: {spec!r}")
    return out


def _face_tables(elems: tuple[int, ...], axis: int, periodic: bool) -> FaceTables:
    ids = np.arange(int(np.prod(elems))).reshape(elems)
    lower = np.take(ids, range(elems[axis] - 1), axis=axis).ravel()
    upper = np.take(ids, range(1, elems[axis]), axis=axis).ravel()
    lo_face = np.take(ids, 0, axis=axis).ravel()
    hi_face = np.take(ids, -1, axis=axis).ravel()
    if periodic:
        lower = np.concatenate([lower, hi_face])
        upper = np.concatenate([upper, lo_face])
        lo_face = hi_face = np.empty(0, dtype=int)
    return FaceTables(interior_lower=lower, interior_upper=upper,
                      boundary_lo=lo_face, boundary_hi=hi_face)


def build_grid(*, ndim: int, p: int, elems: Sequence[int],
               box: Sequence[tuple[float, float]], bcs) -> Grid:
    """Construct a grid.

    ``bcs`` maps axis -> PERIODIC, a WallSpec (both faces), or
    ``{"lo": WallSpec, "hi": WallSpec}``.
    """
    if not 1 <= ndim <= 3:
        raise ValueError("ndim must be 1, 2, or 3")
    elems = tuple(int(k) for k in elems)
    if len(elems) != ndim or any(k < 1 for k in elems):
        raise ValueError("element counts must be positive, one per direction")
    box = tuple((float(a), float(b)) for a, b in box)
    if len(box) != ndim or any(b <= a for a, b in box):
        raise ValueError("domain box must have positive extent per direction")

    bc_map = _normalize_bcs(ndim, bcs)
    for (axis, _), bc in bc_map.items():
        if isinstance(bc, WallSpec) and bc.u_wall.size < ndim:
            raise ValueError(f"wall velocity on axis {axis} needs {ndim} components")

    ops = build_sbp(p)
    tmap = TensorIndexMap(ndim=ndim, shape=(ops.n,) * ndim, nfields=ndim + 2)
    faces = tuple(_face_tables(elems, d, bc_map[(d, -1)] == PERIODIC)
                  for d in range(ndim))
    return Grid(ndim=ndim, p=p, elems=elems,
                lo=tuple(a for a, _ in box), hi=tuple(b for _, b in box),
                bcs=bc_map, ops=ops, tmap=tmap, faces=faces)


def project_function(grid: Grid, gas: GasModel,
                     f: Callable[[np.ndarray], np.ndarray]) -> FieldArray:
    """Collocate a pointwise primitive-state function into conservative storage.

    ``f`` receives coordinates shaped (..., ndim) and returns primitive states
    shaped (..., nf); nonphysical values raise with the offending node.
    """
    v = np.asarray(f(grid.coords()), dtype=float)
    want = (grid.nelems, *([grid.ops.n] * grid.ndim), grid.nfields)
    if v.shape != want:
        raise ValueError(f"projected state has shape {v.shape}, expected {want}")
    return prim_to_cons(gas, v)


def describe_grid(grid: Grid) -> dict:
    """JSON-ready grid summary for run metadata."""
    bcs = {}
    for (axis, side), bc in sorted(grid.bcs.items()):
        key = f"x{axis + 1}_{'lo' if side < 0 else 'hi'}"
        if bc == PERIODIC:
            bcs[key] = PERIODIC
        else:
            bcs[key] = {"kind": bc.kind, "u_wall": list(map(float, bc.u_wall)),
                        "t_wall": bc.t_wall}
    return {
        "ndim": grid.ndim, "p": grid.p, "elems": list(grid.elems),
        "box": [[grid.lo[d], grid.hi[d]] for d in range(grid.ndim)],
        "h": list(grid.h), "jacobian": grid.jacobian,
        "nodes_per_element": grid.ops.n ** grid.ndim,
        "total_nodes": grid.nelems * grid.ops.n ** grid.ndim,
        "bcs": bcs,
    }
