r"""Perfect-gas closure, variable transforms, and entropy structure.

State vectors carry ``nf = ndim + 2`` components on the last axis:

* conservative ``q = (rho, rho*U_1..U_ndim, rho*E)``,
* primitive ``v = (rho, U_1..U_ndim, T)``,
* entropy ``w = dS/dq`` for the pair ``(S, F_i) = (-rho*s, -rho*U_i*s)`` with
  ``s = c_v ln T - R ln rho``, which evaluates to

  ``w = (h/T - s - |U|^2 / (2T),  U_i / T,  -1/T)``, ``h = c_p T``.

All quantities are nondimensional: the shipped convention scales
``rho_inf = T_inf = R = 1`` so ``c_inf = sqrt(gamma)``, ``U_inf = Ma c_inf``
and ``mu = U_inf / Re`` (unit reference length).  The change-of-variables
Jacobian ``dq/dw`` is symmetric positive-definite; its closed form (and the
closed forms of ``dw/dv``, ``dq/dv``, ``dv/dw`` used by the wall penalties)
are validated against finite differences in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class NonphysicalStateError(ValueError):
    """A state violated rho > 0, T > 0; carries the first offending node."""

    def __init__(self, message: str, where=None, values=None):
        super().__init__(message)
        self.where = where
        self.values = values


@dataclass(frozen=True)
class GasModel:
    """Nondimensional perfect-gas parameters.

    ``alpha`` scales the kinematic viscosity ``nu = alpha*mu/rho + beta_diff``
    of the mass-diffusive model; ``Pr``/``kappa`` feed only the 1D classical
    Navier-Stokes closure.
    """

    gamma: float = 1.4
    R: float = 1.0
    mu: float = 0.0
    alpha: float = 1.0
    beta_diff: float = 0.0
    Pr: float = 0.75

    def __post_init__(self) -> None:
        if not self.gamma > 1.0:
            raise ValueError("gamma must exceed 1")
        if not self.R > 0.0:
            raise ValueError("R must be positive")
        if self.mu < 0.0:
            raise ValueError("mu must be nonnegative")
        if not 1.0 <= self.alpha <= 4.0 / 3.0:
            raise ValueError("alpha must lie in [1, 4/3]")
        if not self.Pr > 0.0:
            raise ValueError("Pr must be positive")

    @property
    def c_v(self) -> float:
        return self.R / (self.gamma - 1.0)

    @property
    def c_p(self) -> float:
        return self.gamma * self.c_v

    @property
    def kappa(self) -> float:
        """Fourier conductivity c_p mu / Pr (1D CNS model only)."""
        return self.c_p * self.mu / self.Pr

    @classmethod
    def from_similarity(cls, *, gamma: float = 1.4, Re: float, Ma: float,
                        alpha: float = 1.0, Pr: float = 0.75) -> "GasModel":
        """Build the nondimensional model from (Re, Ma) similarity parameters."""
        u_inf = Ma * np.sqrt(gamma)
        return cls(gamma=gamma, R=1.0, mu=float(u_inf / Re), alpha=alpha, Pr=Pr)

    def reference_velocity(self, Ma: float) -> float:
        return Ma * np.sqrt(self.gamma * self.R)


def _ndim(state: np.ndarray) -> int:
    nf = state.shape[-1]
    if nf not in (3, 4, 5):
        raise ValueError(f"state must have ndim+2 in (3,4,5) fields, got {nf}")
    return nf - 2


def _raise_nonphysical(kind: str, bad: np.ndarray, state: np.ndarray) -> None:
    where = np.unravel_index(int(np.argmax(bad)), bad.shape)
    raise NonphysicalStateError(
        f"nonphysical state ({kind} <= 0) at node index {where}: "
        f"{state[where]}", where=where, values=state[where])


def check_physical(v: np.ndarray) -> None:
    """Validate rho > 0 and T > 0 on a primitive state array."""
    rho, t = v[..., 0], v[..., -1]
    if not np.all(rho > 0.0):
        _raise_nonphysical("rho", ~(rho > 0.0), v)
    if not np.all(t > 0.0):
        _raise_nonphysical("T", ~(t > 0.0), v)


def prim_to_cons(gas: GasModel, v: np.ndarray) -> np.ndarray:
    check_physical(v)
    ndim = _ndim(v)
    rho, t = v[..., :1], v[..., -1:]
    u = v[..., 1:1 + ndim]
    q = np.empty_like(v)
    q[..., :1] = rho
    q[..., 1:1 + ndim] = rho * u
    q[..., -1:] = rho * (gas.c_v * t + 0.5 * np.sum(u * u, axis=-1, keepdims=True))
    return q


def cons_to_prim(gas: GasModel, q: np.ndarray) -> np.ndarray:
    ndim = _ndim(q)
    rho = q[..., :1]
    if not np.all(rho > 0.0):
        _raise_nonphysical("rho", ~(rho[..., 0] > 0.0), q)
    u = q[..., 1:1 + ndim] / rho
    t = (q[..., -1:] / rho - 0.5 * np.sum(u * u, axis=-1, keepdims=True)) / gas.c_v
    if not np.all(t > 0.0):
        _raise_nonphysical("T", ~(t[..., 0] > 0.0), q)
    v = np.empty_like(q)
    v[..., :1] = rho
    v[..., 1:1 + ndim] = u
    v[..., -1:] = t
    return v


def pressure(gas: GasModel, v: np.ndarray) -> np.ndarray:
    return gas.R * v[..., 0] * v[..., -1]


def sound_speed(gas: GasModel, v: np.ndarray) -> np.ndarray:
    return np.sqrt(gas.gamma * gas.R * v[..., -1])


def specific_entropy(gas: GasModel, v: np.ndarray) -> np.ndarray:
    """s = c_v ln T - R ln rho (additive constant zero)."""
    return gas.c_v * np.log(v[..., -1]) - gas.R * np.log(v[..., 0])


def entropy_scalars(gas: GasModel, v: np.ndarray):
    """Entropy pair and flux potential: (s, S, F_i, psi_i).

    ``S = -rho s``, ``F_i = -rho U_i s`` and ``psi_i = R rho U_i`` satisfies
    the potential identity ``psi_i = w^T f^I_i - F_i`` (psi reduces to
    ``rho U_i`` in the shipped R = 1 scaling).
    """
    check_physical(v)
    ndim = _ndim(v)
    s = specific_entropy(gas, v)
    rho = v[..., 0]
    u = v[..., 1:1 + ndim]
    entropy = -rho * s
    f = -(rho * s)[..., None] * u
    psi = gas.R * rho[..., None] * u
    return s, entropy, f, psi


def entropy_function(gas: GasModel, q: np.ndarray) -> np.ndarray:
    """S(q) = -rho s, as a function of the conservative state."""
    v = cons_to_prim(gas, q)
    return -v[..., 0] * specific_entropy(gas, v)


def entropy_vars(gas: GasModel, v: np.ndarray, check: bool = True) -> np.ndarray:
    if check:
        check_physical(v)
    ndim = _ndim(v)
    t = v[..., -1:]
    u = v[..., 1:1 + ndim]
    s = specific_entropy(gas, v)[..., None]
    w = np.empty_like(v)
    w[..., :1] = gas.c_p - s - 0.5 * np.sum(u * u, axis=-1, keepdims=True) / t
    w[..., 1:1 + ndim] = u / t
    w[..., -1:] = -1.0 / t
    return w


def entropy_to_prim(gas: GasModel, w: np.ndarray) -> np.ndarray:
    """Invert w -> v (bijective on the physical set)."""
    ndim = _ndim(w)
    t = -1.0 / w[..., -1:]
    u = w[..., 1:1 + ndim] * t
    s = gas.c_p - w[..., :1] - 0.5 * np.sum(u * u, axis=-1, keepdims=True) / t
    rho = np.exp((gas.c_v * np.log(t) - s) / gas.R)
    v = np.empty_like(w)
    v[..., :1] = rho
    v[..., 1:1 + ndim] = u
    v[..., -1:] = t
    return v


def dqdw(gas: GasModel, v: np.ndarray, check: bool = True) -> np.ndarray:
    """Jacobian dq/dw(v): symmetric positive-definite, shape (..., nf, nf)."""
    if check:
        check_physical(v)
    ndim = _ndim(v)
    nf = ndim + 2
    rho = v[..., 0]
    t = v[..., -1]
    u = v[..., 1:1 + ndim]
    usq = np.sum(u * u, axis=-1)
    cp, r = gas.c_p, gas.R

    a = np.empty(v.shape[:-1] + (nf, nf))
    a[..., 0, 0] = rho / r
    col_e0 = rho * (-2.0 * r * t + usq + 2.0 * t * cp) / (2.0 * r)
    a[..., 0, -1] = col_e0
    a[..., -1, 0] = col_e0
    for i in range(ndim):
        a[..., 0, 1 + i] = u[..., i] * rho / r
        a[..., 1 + i, 0] = a[..., 0, 1 + i]
        for j in range(ndim):
            a[..., 1 + i, 1 + j] = u[..., i] * u[..., j] * rho / r
        a[..., 1 + i, 1 + i] += rho * t
        mom_e = u[..., i] * rho * (usq + 2.0 * t * cp) / (2.0 * r)
        a[..., 1 + i, -1] = mom_e
        a[..., -1, 1 + i] = mom_e
    a[..., -1, -1] = rho * (usq**2 + 4.0 * t * cp * (-r * t + usq + t * cp)) / (4.0 * r)
    return a


def dwdv(gas: GasModel, v: np.ndarray, check: bool = True) -> np.ndarray:
    """Jacobian of the entropy variables with respect to (rho, U_i, T)."""
    if check:
        check_physical(v)
    ndim = _ndim(v)
    nf = ndim + 2
    rho = v[..., 0]
    t = v[..., -1]
    u = v[..., 1:1 + ndim]
    usq = np.sum(u * u, axis=-1)

    m = np.zeros(v.shape[:-1] + (nf, nf))
    m[..., 0, 0] = gas.R / rho
    m[..., 0, -1] = -gas.c_v / t + 0.5 * usq / t**2
    for i in range(ndim):
        m[..., 0, 1 + i] = -u[..., i] / t
        m[..., 1 + i, 1 + i] = 1.0 / t
        m[..., 1 + i, -1] = -u[..., i] / t**2
    m[..., -1, -1] = 1.0 / t**2
    return m


def dvdw(gas: GasModel, v: np.ndarray, check: bool = True) -> np.ndarray:
    """Closed-form inverse of dw/dv (primitive state sensitivities to w)."""
    if check:
        check_physical(v)
    ndim = _ndim(v)
    nf = ndim + 2
    rho = v[..., 0]
    t = v[..., -1]
    u = v[..., 1:1 + ndim]
    usq = np.sum(u * u, axis=-1)

    m = np.zeros(v.shape[:-1] + (nf, nf))
    m[..., 0, 0] = rho / gas.R
    m[..., 0, -1] = rho * (gas.c_v * t + 0.5 * usq) / gas.R
    for i in range(ndim):
        m[..., 0, 1 + i] = rho * u[..., i] / gas.R
        m[..., 1 + i, 1 + i] = t
        m[..., 1 + i, -1] = u[..., i] * t
    m[..., -1, -1] = t**2
    return m


def dqdv(gas: GasModel, v: np.ndarray) -> np.ndarray:
    """Jacobian of the conservative state with respect to (rho, U_i, T)."""
    ndim = _ndim(v)
    nf = ndim + 2
    rho = v[..., 0]
    t = v[..., -1]
    u = v[..., 1:1 + ndim]
    usq = np.sum(u * u, axis=-1)

    m = np.zeros(v.shape[:-1] + (nf, nf))
    m[..., 0, 0] = 1.0
    m[..., -1, 0] = gas.c_v * t + 0.5 * usq
    m[..., -1, -1] = rho * gas.c_v
    for i in range(ndim):
        m[..., 1 + i, 0] = u[..., i]
        m[..., 1 + i, 1 + i] = rho
        m[..., -1, 1 + i] = rho * u[..., i]
    return m


def kinematic_viscosity(gas: GasModel, rho: np.ndarray) -> np.ndarray:
    """nu = alpha mu / rho + beta_diff (the mass-diffusive model's coefficient)."""
    return gas.alpha * gas.mu / rho + gas.beta_diff
