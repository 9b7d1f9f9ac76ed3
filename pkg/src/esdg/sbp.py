r"""Diagonal-norm SBP operators on Legendre-Gauss-Lobatto nodes.

A first-derivative SBP operator of degree ``p`` on ``N = p + 1`` nodes
consists of

* a positive diagonal norm (quadrature) matrix ``P``,
* an almost-skew matrix ``Q`` with ``Q + Q^T = B = diag(-1, 0, ..., 0, 1)``,
* the derivative ``D = P^{-1} Q``, exact on monomials up to degree ``p``.

The telescoping companions are the two-point difference stencil ``delta``
(shape ``N x (N+1)``, rows ``(-1, +1)``) and the solution-to-flux-point
interpolation ``i_stof`` (shape ``(N+1) x N``) satisfying
``Q = delta @ i_stof``, so that ``D f = P^{-1} delta (i_stof f)`` rewrites
the derivative as a flux-point difference.  Multi-dimensional operators are
Kronecker products of the 1D operator with identities; :class:`TensorIndexMap`
encodes the node/field linearization so the product is never formed densely.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

#: Degrees the LGL construction is validated for; higher degrees are rejected
#: outright rather than silently degrading conditioning.
MAX_DEGREE = 7

_NEWTON_TOL = 1e-15
_NEWTON_MAXIT = 100


class InvalidDegreeError(ValueError):
    """Raised for operator degrees outside the supported range 1..7."""


def _check_degree(p: int) -> None:
    if not isinstance(p, (int, np.integer)) or p < 1 or p > MAX_DEGREE:
        raise InvalidDegreeError(
            f"SBP degree must be an integer in 1..{MAX_DEGREE}, got {p!r}")


def _legendre_and_prev(x: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate (P_n, P_{n-1}) by the three-term recurrence."""
    pkm1 = np.ones_like(x)
    pk = x.copy()
    if n == 0:
        return pkm1, np.zeros_like(x)
    for k in range(1, n):
        pkm1, pk = pk, ((2 * k + 1) * x * pk - k * pkm1) / (k + 1)
    return pk, pkm1


def lgl_nodes_weights(p: int) -> tuple[np.ndarray, np.ndarray]:
    r"""Legendre-Gauss-Lobatto nodes and quadrature weights on [-1, 1].

    The nodes are the roots of ``(1 - x^2) P'_p(x)``, found by Newton
    iteration on ``g(x) = x P_p - P_{p-1}`` (same roots; ``g' = (p+1) P_p``
    exactly, so the update is plain Newton) from Chebyshev-Gauss-Lobatto
    starting values.  Weights are ``2 / (p (p+1) P_p(x)^2)``; the rule is
    exact for polynomials of degree ``2p - 1``.
    """
    _check_degree(p)
    n = p + 1
    x = -np.cos(np.pi * np.arange(n) / p)
    for _ in range(_NEWTON_MAXIT):
        pn, pnm1 = _legendre_and_prev(x, p)
        dx = (x * pn - pnm1) / ((p + 1) * pn)
        x -= dx
        if np.max(np.abs(dx)) <= _NEWTON_TOL:
            break
    # Enforce exact symmetry; Newton leaves the endpoints at +-1 already.
    x = 0.5 * (x - x[::-1])
    x[0], x[-1] = -1.0, 1.0
    pn, _ = _legendre_and_prev(x, p)
    wts = 2.0 / (p * (p + 1) * pn**2)
    wts = 0.5 * (wts + wts[::-1])
    return x, wts


def _derivative_matrix(x: np.ndarray) -> np.ndarray:
    """Collocation derivative via barycentric weights (exact to degree N-1)."""
    n = x.size
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    lam = 1.0 / np.prod(diff, axis=1)
    d = (lam[None, :] / lam[:, None]) / diff
    np.fill_diagonal(d, 0.0)
    np.fill_diagonal(d, -np.sum(d, axis=1))
    return d


@dataclass(frozen=True)
class SbpOperators:
    """Immutable bundle of one-dimensional SBP operators of degree ``p``.

    ``D = P^{-1} Q`` holds elementwise by construction and
    ``Q = delta @ i_stof`` ties the derivative to its telescoped flux-point
    form.  Instances are cached per degree and safe to share across workers.
    """

    p: int
    n: int
    nodes: np.ndarray
    weights: np.ndarray          # diagonal of P
    q: np.ndarray
    d: np.ndarray
    b: np.ndarray
    delta: np.ndarray            # N x (N+1)
    i_stof: np.ndarray           # (N+1) x N

    def __post_init__(self) -> None:
        for name in ("nodes", "weights", "q", "d", "b", "delta", "i_stof"):
            getattr(self, name).setflags(write=False)


@lru_cache(maxsize=None)
def build_sbp(p: int) -> SbpOperators:
    """Construct (and cache) the degree-``p`` LGL SBP operator bundle."""
    _check_degree(int(p))
    p = int(p)
    n = p + 1
    x, wts = lgl_nodes_weights(p)
    b = np.zeros((n, n))
    b[0, 0], b[-1, -1] = -1.0, 1.0

    q = wts[:, None] * _derivative_matrix(x)
    # The SBP property holds analytically on LGL nodes; symmetrizing removes
    # the last few ulps so Q + Q^T = B is exact.
    q = 0.5 * (q - q.T + b)
    d = q / wts[:, None]

    delta = np.zeros((n, n + 1))
    idx = np.arange(n)
    delta[idx, idx] = -1.0
    delta[idx, idx + 1] = 1.0

    # Rows of i_stof are e_0 plus partial row-sums of Q, so that
    # delta @ i_stof = Q.  Q's rows sum to zero, hence each row of i_stof
    # sums to one (consistent interpolation), and the end rows reduce to the
    # endpoint nodal values.
    i_stof = np.zeros((n + 1, n))
    i_stof[0, 0] = 1.0
    i_stof[1:] = i_stof[0] + np.cumsum(q, axis=0)

    return SbpOperators(p=p, n=n, nodes=x, weights=wts, q=q, d=d, b=b,
                        delta=delta, i_stof=i_stof)


@dataclass(frozen=True)
class TensorIndexMap:
    """Node/field linearization for tensor-product elements.

    Nodes are stored C-ordered with the ``x_1`` index slowest and the field
    index fastest (field-innermost), which is exactly the flattening of the
    Kronecker products ``D_{x_1} = D (x) I (x) ... (x) I_nf`` etc.  All
    modules share this one rule: a nodal array for one element has shape
    ``(*shape, nfields)`` and flattens to it.
    """

    ndim: int
    shape: tuple[int, ...]
    nfields: int

    def __post_init__(self) -> None:
        if self.ndim != len(self.shape) or not 1 <= self.ndim <= 3:
            raise ValueError("shape must provide one node count per dimension (1..3)")

    @property
    def nnodes(self) -> int:
        return int(np.prod(self.shape))

    def flat_index(self, node: Sequence[int], fld: int) -> int:
        """Flat storage offset of (node multi-index, field)."""
        k = 0
        for i, n in zip(node, self.shape):
            k = k * n + i
        return k * self.nfields + fld

    def face_nodes(self, axis: int, side: int) -> np.ndarray:
        """Node-space indices of the face where the B mask of ``axis`` hits.

        ``side`` is -1 for the low face (B^- mask) and +1 for the high face
        (B^+ mask); fields are not included.
        """
        node_ids = np.arange(self.nnodes).reshape(self.shape)
        return np.take(node_ids, 0 if side < 0 else -1, axis=axis).ravel()


def apply_derivative(op: SbpOperators, tmap: TensorIndexMap, axis: int,
                     fld: np.ndarray) -> np.ndarray:
    """Apply the 1D derivative along ``axis`` through the tensor map.

    ``fld`` may carry any number of leading (element batch) axes before the
    ``(*shape, nfields)`` block; the contraction reproduces the Kronecker
    operator without forming it.
    """
    if fld.shape[-tmap.ndim - 1:-1] != tmap.shape or fld.shape[-1] != tmap.nfields:
        raise ValueError(
            f"field shape {fld.shape} does not match map {tmap.shape}+({tmap.nfields},)")
    return apply_along_axis(op.d, fld, fld.ndim - 1 - tmap.ndim + axis)


def apply_along_axis(mat: np.ndarray, fld: np.ndarray, axis: int) -> np.ndarray:
    """Contract ``mat`` with ``fld`` along one axis."""
    if axis == fld.ndim - 2:
        return np.einsum("ij,...jf->...if", mat, fld)
    moved = np.moveaxis(fld, axis, -1)
    out = moved @ mat.T
    return np.moveaxis(out, -1, axis)


def dump_operators_csv(op: SbpOperators, directory) -> None:
    """Debug dump of the operator matrices (row-major, 17 significant digits)."""
    import os

    os.makedirs(directory, exist_ok=True)
    for name in ("nodes", "weights", "q", "d", "b", "delta", "i_stof"):
        arr = np.atleast_2d(getattr(op, name))
        path = os.path.join(directory, f"p{op.p}_{name}.csv")
        np.savetxt(path, arr, delimiter=",", fmt="%.17g")
