r"""Pointwise and two-point flux kernels.

The entropy-conservative two-point flux follows the kinetic-energy-preserving
construction with logarithmic means of density and inverse temperature,

* ``rho_hat = logmean(rho_L, rho_R)``,
* ``beta_c = 1/(2 R T)``, ``beta_hat = logmean(beta_L, beta_R)``,
* ``p_tilde = avg(rho) / (2 avg(beta_c))``,
* ``f_rho = rho_hat avg(U_n)``; ``f_{m,i} = avg(U_i) f_rho + p_tilde d_{in}``;
* ``f_E = [1/(2(gamma-1) beta_hat) - avg(|U|^2)/2] f_rho + avg(U) . f_m``,

whose contract is the Tadmor condition
``(w_R - w_L)^T f* = psi_n(R) - psi_n(L)`` (any algebraically equivalent
variant passing that oracle is acceptable).  The entropy-stable variant
subtracts ``1/2 lambda_max dq/dw(v_avg) (w_R - w_L)``; since ``dq/dw`` is SPD
the jump term is entropy dissipative by construction.

The mass-diffusive model's viscous flux is simply ``nu * d(q)/dx_n`` applied
to every component; its entropy-variable form ``[nu dq/dw] Theta`` is the
same object by the chain rule and is checked as such.
"""

from __future__ import annotations

import numpy as np

from .gas import GasModel, check_physical, dqdw, kinematic_viscosity, sound_speed

#: Relative jump below which the logarithmic mean switches to its expansion.
LOGMEAN_SERIES_CUTOFF = 1e-4


def inviscid_flux(gas: GasModel, v: np.ndarray, axis: int,
                  check: bool = True) -> np.ndarray:
    """Inviscid flux in coordinate direction ``axis``: (rho U_n, rho U_i U_n + p d_in, (rho E + p) U_n)."""
    if check:
        check_physical(v)
    ndim = v.shape[-1] - 2
    rho, t = v[..., 0], v[..., -1]
    u = v[..., 1:1 + ndim]
    un = u[..., axis]
    p = gas.R * rho * t
    rho_e = rho * (gas.c_v * t + 0.5 * np.sum(u * u, axis=-1))
    f = np.empty_like(v)
    f[..., 0] = rho * un
    f[..., 1:1 + ndim] = (rho * un)[..., None] * u
    f[..., 1 + axis] += p
    f[..., -1] = (rho_e + p) * un
    return f


def logmean(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Logarithmic mean (a - b)/(ln a - ln b), series branch near a = b.

    With f = (a-b)/(a+b) and u = f^2, ln(a/b) = 2f(1 + u/3 + u^2/5 + u^3/7 + ...),
    so the mean is (a+b)/2 / (1 + u/3 + u^2/5 + u^3/7) to full precision for
    relative jumps below the cutoff.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(a <= 0.0) or np.any(b <= 0.0):
        raise ValueError("logmean requires positive arguments")
    psum = a + b
    f = (a - b) / psum
    u = f * f
    series = 0.5 * psum / (1.0 + u * (1.0 / 3.0 + u * (1.0 / 5.0 + u / 7.0)))
    # Evaluate the quotient branch with the jump clamped away from zero so it
    # never divides 0/0; the mask picks the series there anyway.
    safe = np.abs(f) >= LOGMEAN_SERIES_CUTOFF
    b_safe = np.where(safe, b, 2.0 * a)
    quotient = (a - b_safe) / np.log(a / b_safe)
    return np.where(safe, quotient, series)


def _unpack(gas: GasModel, v: np.ndarray):
    ndim = v.shape[-1] - 2
    rho, t = v[..., 0], v[..., -1]
    u = v[..., 1:1 + ndim]
    beta = 1.0 / (2.0 * gas.R * t)
    return rho, u, t, beta


def ec_two_point_flux(gas: GasModel, v_l: np.ndarray, v_r: np.ndarray,
                      axis: int, check: bool = True) -> np.ndarray:
    """Entropy-conservative two-point flux in coordinate direction ``axis``."""
    if check:
        check_physical(v_l)
        check_physical(v_r)
    ndim = v_l.shape[-1] - 2
    rho_l, u_l, _, beta_l = _unpack(gas, v_l)
    rho_r, u_r, _, beta_r = _unpack(gas, v_r)

    rho_hat = logmean(rho_l, rho_r)
    beta_hat = logmean(beta_l, beta_r)
    u_avg = 0.5 * (u_l + u_r)
    p_tilde = 0.5 * (rho_l + rho_r) / (beta_l + beta_r)
    usq_avg = 0.5 * (np.sum(u_l * u_l, axis=-1) + np.sum(u_r * u_r, axis=-1))

    f = np.empty_like(v_l)
    f_rho = rho_hat * u_avg[..., axis]
    f[..., 0] = f_rho
    f[..., 1:1 + ndim] = u_avg * f_rho[..., None]
    f[..., 1 + axis] += p_tilde
    f[..., -1] = (0.5 / ((gas.gamma - 1.0) * beta_hat) - 0.5 * usq_avg) * f_rho \
        + np.sum(u_avg * f[..., 1:1 + ndim], axis=-1)
    return f


def max_wave_speed(gas: GasModel, v_l: np.ndarray, v_r: np.ndarray,
                   axis: int) -> np.ndarray:
    """max(|U_n| + c) over the left, right, and averaged primitive states."""
    v_avg = 0.5 * (v_l + v_r)
    lam = np.abs(v_avg[..., 1 + axis]) + sound_speed(gas, v_avg)
    for v in (v_l, v_r):
        lam = np.maximum(lam, np.abs(v[..., 1 + axis]) + sound_speed(gas, v))
    return lam


def es_two_point_flux(gas: GasModel, v_l: np.ndarray, v_r: np.ndarray,
                      axis: int, check: bool = True, w_l: np.ndarray = None,
                      w_r: np.ndarray = None) -> np.ndarray:
    """Entropy-stable flux: EC flux minus scalar-wave-speed symmetrizer dissipation.

    ``w_l``/``w_r`` optionally pass in the already-computed entropy variables
    of the two states.
    """
    from .gas import entropy_vars

    f = ec_two_point_flux(gas, v_l, v_r, axis, check=check)
    lam = max_wave_speed(gas, v_l, v_r, axis)
    if w_l is None:
        w_l = entropy_vars(gas, v_l, check=False)
    if w_r is None:
        w_r = entropy_vars(gas, v_r, check=False)
    dw = w_r - w_l
    a_bar = dqdw(gas, 0.5 * (v_l + v_r), check=False)
    diss = (a_bar @ dw[..., None])[..., 0]
    return f - 0.5 * lam[..., None] * diss


def viscous_flux_mass_diffusive(gas: GasModel, q: np.ndarray,
                                grad_q, axis: int) -> np.ndarray:
    """nu * d(q)/dx_n with nu = alpha mu / rho + beta_diff on all components.

    ``grad_q`` is a sequence of per-direction conservative gradients shaped
    like ``q``.
    """
    rho = q[..., 0]
    if not np.all(rho > 0.0):
        raise ValueError("viscous flux requires positive density")
    nu = kinematic_viscosity(gas, rho)
    return nu[..., None] * np.asarray(grad_q[axis])
