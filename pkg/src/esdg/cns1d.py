r"""One-dimensional classical compressible Navier-Stokes closure.

Viscous flux ``(0, 4/3 mu U_x, 4/3 mu U U_x + kappa T_x)`` with Fourier
conductivity ``kappa = c_p mu / Pr`` (``Pr = 3/4`` by default).  Rewriting the
gradient in entropy variables gives ``f^V = C(v) Theta`` with the symmetric
positive-semidefinite coefficient

    C = [[0, 0,        0        ],
         [0, a T,      a T U    ],
         [0, a T U,    a T U^2 + kappa T^2]],   a = 4/3 mu,

so the entropy-budget machinery applies unchanged with ``C`` in place of the
mass-diffusive model's ``[nu dq/dw]``.  The no-slip adiabatic wall mirrors the
velocity and flips only the temperature-gradient row of the primitive
gradient (the density gradient is unconstrained: the mass equation carries no
diffusion).  This model exists for the 1D blast-wave comparison and rejects
any other dimensionality.
"""

from __future__ import annotations

import numpy as np

from .gas import GasModel, check_physical

#: Viscous stress factor of the 1D compressible stress tensor.
STRESS_FACTOR = 4.0 / 3.0


def _require_1d(v: np.ndarray) -> None:
    if v.shape[-1] != 3:
        raise ValueError("the classical Navier-Stokes closure is 1D only "
                         f"(3 fields), got {v.shape[-1]} fields")


def cns_viscous_flux(gas: GasModel, v: np.ndarray, grad_v: np.ndarray) -> np.ndarray:
    """Viscous flux from primitive gradients grad_v = (rho_x, U_x, T_x)."""
    _require_1d(v)
    check_physical(v)
    u = v[..., 1]
    u_x = grad_v[..., 1]
    t_x = grad_v[..., 2]
    f = np.zeros_like(v)
    f[..., 1] = STRESS_FACTOR * gas.mu * u_x
    f[..., 2] = STRESS_FACTOR * gas.mu * u * u_x + gas.kappa * t_x
    return f


def cns_diffusion_matrix(gas: GasModel, v: np.ndarray,
                         check: bool = True) -> np.ndarray:
    """Symmetric PSD coefficient C(v) with f^V = C(v) Theta, shape (..., 3, 3)."""
    _require_1d(v)
    if check:
        check_physical(v)
    u = v[..., 1]
    t = v[..., 2]
    a = STRESS_FACTOR * gas.mu
    c = np.zeros(v.shape[:-1] + (3, 3))
    c[..., 1, 1] = a * t
    c[..., 1, 2] = a * t * u
    c[..., 2, 1] = c[..., 1, 2]
    c[..., 2, 2] = a * t * u * u + gas.kappa * t * t
    return c


def cns_gradient_mirror_signs() -> np.ndarray:
    """Primitive-gradient sign flips for the manufactured wall gradient.

    Only the temperature row flips; density diffusion is absent so its
    gradient needs no boundary condition.
    """
    return np.array([1.0, 1.0, -1.0])
