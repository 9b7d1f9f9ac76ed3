r"""No-slip wall penalties and the shared face-coupling kernel.

A wall is imposed weakly by feeding manufactured ghost data into exactly the
same simultaneous-approximation-term kernel that couples interior element
faces, so one subroutine serves both (:func:`theta_face_penalty`,
:func:`q_face_penalties`).  Per face node with outward side sign ``sigma``:

* gradient equation: ``g^Theta = sigma/2 (w_ghost - w)``,
* viscous flux:      ``g^{V,q} = sigma/2 (f_ghost - f_visc)``,
* inviscid coupling: the telescoped end flux point is replaced by the
  entropy-conservative two-point flux against the ghost state, and
* optional interior-penalty dissipation and heat-entropy-flux source.

Ghost data for the mass-diffusive model:

* inviscid mirror: normal velocity negated, all else kept;
* viscous mirror: ``(rho, 2 U_wall - U, T)``;
* manufactured gradient: ``Theta~ = dw/dv(v_ghost) diag(-1, 1, ..., 1, -1) Pi``
  where ``Pi`` is the primitive-variable normal gradient reconstructed from
  ``Theta`` (density and temperature rows flip, enforcing the zero normal
  density gradient and the heat-flux datum weakly);
* manufactured viscous flux ``f_ghost = [nu dq/dw](v_ghost) Theta~``.

With these inputs the wall's entropy-rate contribution cancels exactly for an
adiabatic wall, reduces to the face quadrature of the heat entropy flux
``g(t)`` otherwise, and the interior-penalty term dissipates with the closed
form ``w^T M = -(2 beta alpha mu / (R T^2)) |dU|^2 (|dU|^2 + R T)``.

The heat source is scaled by the local temperature (``L = -e_E T g(t)``) so
that ``w^T L = g(t)`` holds exactly node-by-node; this is what makes the
semidiscrete budget identity hold to machine precision for any state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .cns1d import cns_diffusion_matrix, cns_gradient_mirror_signs
from .gas import (GasModel, check_physical, dqdw, dvdw, dwdv,
                  kinematic_viscosity)

WALL_KINDS = ("adiabatic", "heatflux", "isothermal")


def heat_flux_zero() -> Callable[[float], float]:
    return lambda t: 0.0


def heat_flux_constant(c: float) -> Callable[[float], float]:
    return lambda t: c


def heat_flux_sinusoidal(amplitude: float, omega: float) -> Callable[[float], float]:
    return lambda t: amplitude * np.sin(omega * t)


def make_heat_flux(kind: str, **params) -> Callable[[float], float]:
    """Named built-in heat-entropy-flux functions: zero | constant | sinusoidal."""
    if kind == "zero":
        return heat_flux_zero()
    if kind == "constant":
        return heat_flux_constant(float(params["value"]))
    if kind == "sinusoidal":
        return heat_flux_sinusoidal(float(params["amplitude"]), float(params["omega"]))
    raise ValueError(f"unknown heat flux kind {kind!r}")


@dataclass(frozen=True)
class WallSpec:
    """No-slip wall data: kind, wall velocity, and thermal datum.

    ``kind`` is adiabatic (g = 0), heatflux (g(t) prescribed), or isothermal
    (T_wall prescribed; experimental, excluded from the stability-audited
    configurations).  The interior-penalty strength lives in the
    semidiscretization options, not here.
    """

    kind: str = "adiabatic"
    u_wall: np.ndarray = field(default_factory=lambda: np.zeros(1))
    g: Optional[Callable[[float], float]] = None
    t_wall: Optional[float] = None

    def __post_init__(self) -> None:
        if self.kind not in WALL_KINDS:
            raise ValueError(f"wall kind must be one of {WALL_KINDS}, got {self.kind!r}")
        object.__setattr__(self, "u_wall", np.atleast_1d(np.asarray(self.u_wall, float)))
        if self.kind == "heatflux" and self.g is None:
            raise ValueError("heatflux wall requires a g(t) function")
        if self.kind == "isothermal" and (self.t_wall is None or self.t_wall <= 0):
            raise ValueError("isothermal wall requires positive t_wall")
        if self.kind == "adiabatic" and self.g is not None:
            raise ValueError("adiabatic wall must not carry heat flux data")

    def heat_entropy_flux(self, t: float) -> float:
        return 0.0 if self.g is None else float(self.g(t))


def diffusion_matrix(gas: GasModel, v: np.ndarray, model: str,
                     check: bool = True) -> np.ndarray:
    """Viscous coefficient of the entropy-gradient form f^V = Lambda(v) Theta."""
    if model == "eulerian":
        nu = kinematic_viscosity(gas, v[..., 0])
        return nu[..., None, None] * dqdw(gas, v, check=check)
    if model == "cns1d":
        return cns_diffusion_matrix(gas, v, check=check)
    raise ValueError(f"unknown model {model!r}")


def gradient_mirror_signs(ndim: int, model: str) -> np.ndarray:
    """Sign flips applied to the primitive normal gradient at a wall."""
    if model == "cns1d":
        return cns_gradient_mirror_signs()
    signs = np.ones(ndim + 2)
    signs[0] = -1.0
    signs[-1] = -1.0
    return signs


# ---------------------------------------------------------------------------
# Manufactured ghost states
# ---------------------------------------------------------------------------

def mirror_inviscid(v: np.ndarray, axis: int) -> np.ndarray:
    """No-penetration mirror: negate the wall-normal velocity component."""
    check_physical(v)
    out = v.copy()
    out[..., 1 + axis] = -out[..., 1 + axis]
    return out


def mirror_viscous(v: np.ndarray, wall: WallSpec) -> np.ndarray:
    """No-slip mirror: reflect all velocity components about the wall velocity.

    Isothermal walls additionally reflect the temperature about ``t_wall``
    (may produce a nonphysical ghost if T > 2 T_wall, which is reported).
    """
    check_physical(v)
    ndim = v.shape[-1] - 2
    out = v.copy()
    out[..., 1:1 + ndim] = 2.0 * wall.u_wall[:ndim] - v[..., 1:1 + ndim]
    if wall.kind == "isothermal":
        out[..., -1] = 2.0 * wall.t_wall - v[..., -1]
    check_physical(out)
    return out


def manufactured_theta(gas: GasModel, v_ghost: np.ndarray, prim_grad: np.ndarray,
                       model: str = "eulerian") -> np.ndarray:
    """Manufactured entropy-variable normal gradient at the wall.

    ``prim_grad`` is the primitive-variable gradient in the wall-normal
    coordinate direction; density/temperature rows are sign-flipped
    (temperature only for the classical model) before mapping through
    ``dw/dv`` at the ghost state.
    """
    ndim = v_ghost.shape[-1] - 2
    signs = gradient_mirror_signs(ndim, model)
    jac = dwdv(gas, v_ghost, check=False)
    return (jac @ (signs * prim_grad)[..., None])[..., 0]


def primitive_gradient_from_theta(gas: GasModel, v: np.ndarray,
                                  theta: np.ndarray) -> np.ndarray:
    """Invert Theta = dw/dv Pi for the primitive gradient Pi at a node."""
    return (dvdw(gas, v, check=False) @ theta[..., None])[..., 0]


# ---------------------------------------------------------------------------
# Single face-coupling subroutine (interior interfaces and walls alike)
# ---------------------------------------------------------------------------

def theta_face_penalty(w_loc: np.ndarray, w_rem: np.ndarray,
                       sigma: int) -> np.ndarray:
    """Gradient-equation lift: sigma/2 (w_remote - w_local)."""
    return 0.5 * sigma * (w_rem - w_loc)


def q_face_penalties(f_inviscid_loc: np.ndarray, f_star: np.ndarray,
                     a_loc: np.ndarray, a_rem: np.ndarray,
                     sigma: int) -> np.ndarray:
    """Conserved-variable SAT for one side of a face.

    Inviscid: replace the telescoped end flux point by the two-point flux
    (written as the SAT ``-sigma (f* - f^I)``).  Viscous: symmetric average
    of the two viscous fluxes, ``sigma/2 (a_remote - a_local)``.
    """
    return -sigma * (f_star - f_inviscid_loc) + 0.5 * sigma * (a_rem - a_loc)


def ip_penalty(gas: GasModel, v_loc: np.ndarray, v_rem: np.ndarray,
               w_loc: np.ndarray, w_rem: np.ndarray, beta: float,
               model: str = "eulerian") -> np.ndarray:
    """Interior-penalty dissipation: -beta/2 (Lambda(v) + Lambda(v_rem)) (w - w_rem)."""
    if beta == 0.0:
        return np.zeros_like(w_loc)
    lam = (diffusion_matrix(gas, v_loc, model, check=False)
           + diffusion_matrix(gas, v_rem, model, check=False))
    dw = w_loc - w_rem
    return -0.5 * beta * (lam @ dw[..., None])[..., 0]


# ---------------------------------------------------------------------------
# Wall-specific pieces
# ---------------------------------------------------------------------------

def inviscid_wall_penalty(gas: GasModel, v: np.ndarray, axis: int,
                          sigma: int = -1, two_point_flux=None) -> np.ndarray:
    """No-penetration SAT: the end flux point replaced by the mirror flux.

    ``-sigma (f*(v, v_mirror) - f^I(v))``; vanishes when the normal velocity
    is zero (consistency), and the mirror flux is the exact pressure flux, so
    the wall's inviscid entropy-rate contribution cancels for any state.
    """
    from .fluxes import ec_two_point_flux, inviscid_flux

    flux = two_point_flux if two_point_flux is not None else ec_two_point_flux
    f_star = flux(gas, v, mirror_inviscid(v, axis), axis)
    return q_face_penalties(inviscid_flux(gas, v, axis), f_star,
                            np.zeros_like(v), np.zeros_like(v), sigma)


def viscous_wall_penalties(gas: GasModel, v: np.ndarray, theta_n: np.ndarray,
                           wall: WallSpec, sigma: int = -1,
                           model: str = "eulerian"):
    """Viscous wall SATs (g^{V,q}, g^Theta) for face nodes with side ``sigma``.

    For sigma = -1 (low face) these are exactly the B^- penalty forms
    ``1/2 ([Lambda] Theta - f_ghost)`` and ``1/2 (w - w_ghost)``.
    """
    from .gas import entropy_vars

    v_ghost = mirror_viscous(v, wall)
    w = entropy_vars(gas, v)
    w_ghost = entropy_vars(gas, v_ghost)
    pi = primitive_gradient_from_theta(gas, v, theta_n)
    theta_ghost = manufactured_theta(gas, v_ghost, pi, model)
    a_loc = np.einsum("...ij,...j->...i", diffusion_matrix(gas, v, model), theta_n)
    f_ghost = np.einsum("...ij,...j->...i",
                        diffusion_matrix(gas, v_ghost, model), theta_ghost)
    g_q = 0.5 * sigma * (f_ghost - a_loc)
    g_theta = theta_face_penalty(w, w_ghost, sigma)
    return g_q, g_theta


def ip_term(gas: GasModel, v: np.ndarray, wall: WallSpec, beta: float,
            model: str = "eulerian") -> np.ndarray:
    """Wall interior-penalty term M = -beta/2 (f^V(v) + f^V(v_ghost)).

    Both flux states act on the entropy-variable jump surrogate
    ``dw = w - w_ghost``; the result satisfies the closed-form dissipation
    rate and is nonpositive in the entropy budget.
    """
    from .gas import entropy_vars

    v_ghost = mirror_viscous(v, wall)
    return ip_penalty(gas, v, v_ghost, entropy_vars(gas, v),
                      entropy_vars(gas, v_ghost), beta, model)


def heat_source(wall: WallSpec, t: float, temperature, nf: int) -> np.ndarray:
    """Heat-entropy-flux source L = -(0, ..., 0, 1)^T T g(t) per face node.

    ``temperature`` is the local wall-node temperature (scalar or face-node
    array); the T scaling makes the budget contribution w^T L equal g(t)
    exactly, node by node.  Adiabatic walls return zeros.
    """
    temperature = np.asarray(temperature, dtype=float)
    out = np.zeros(temperature.shape + (nf,))
    out[..., -1] = -temperature * wall.heat_entropy_flux(t)
    return out
