r"""Adaptive embedded Runge-Kutta 3(2) time integration.

Bogacki-Shampine coefficients with the first-same-as-last property: three
fresh evaluations per accepted step, the trailing stage doubling as the next
step's first.  Error control uses the weighted RMS norm
``sqrt(mean((err / (atol + rtol |q|))^2))``; accepted steps scale the size by
``safety * err^(-1/3)`` clipped to the configured ratio bounds, rejected
steps halve (never below the minimum ratio).  The loop is a plain
deterministic scan: identical inputs produce bit-identical trajectories.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .gas import NonphysicalStateError

# Bogacki-Shampine 3(2) tableau.
_C = (0.0, 0.5, 0.75, 1.0)
_A21 = 0.5
_A32 = 0.75
_B = (2.0 / 9.0, 1.0 / 3.0, 4.0 / 9.0)           # 3rd-order solution
_E = (-5.0 / 72.0, 1.0 / 12.0, 1.0 / 9.0, -1.0 / 8.0)  # error estimate weights


class IntegrationError(RuntimeError):
    """Step size underflow or nonphysical failure during integration."""


@dataclass(frozen=True)
class IntegratorConfig:
    t_end: float
    t_start: float = 0.0
    rtol: float = 1e-8
    atol: float = 1e-8
    dt_init: Optional[float] = None
    dt_max: float = np.inf
    safety: float = 0.9
    ratio_min: float = 0.2
    ratio_max: float = 5.0
    adaptive: bool = True
    stop_after_accepted: Optional[int] = None
    max_steps: int = 50_000_000

    def __post_init__(self) -> None:
        if not (self.rtol > 0.0 and self.atol > 0.0):
            raise ValueError("tolerances must be positive")
        if not self.t_end > self.t_start:
            raise ValueError("t_end must exceed t_start")
        if self.dt_init is not None and self.dt_init <= 0.0:
            raise ValueError("dt_init must be positive")


@dataclass
class StepRecord:
    t: float
    dt: float
    accepted: bool
    error: float


@dataclass
class IntegrationResult:
    t: float
    q: np.ndarray
    n_accepted: int
    n_rejected: int
    n_rhs: int
    steps: list[StepRecord] = field(default_factory=list)

    def write_step_log(self, path) -> None:
        import csv

        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(("t", "dt", "accepted", "error"))
            for s in self.steps:
                writer.writerow((f"{s.t:.17g}", f"{s.dt:.17g}",
                                 int(s.accepted), f"{s.error:.17g}"))


def _error_norm(err: np.ndarray, q0: np.ndarray, q1: np.ndarray,
                rtol: float, atol: float) -> float:
    scale = atol + rtol * np.maximum(np.abs(q0), np.abs(q1))
    r = err / scale
    return float(np.sqrt(np.mean(r * r)))


def integrate(rhs: Callable[[np.ndarray, float], np.ndarray],
              q0: np.ndarray, config: IntegratorConfig,
              observers: Sequence[Callable] = (),
              record_steps: bool = False) -> IntegrationResult:
    """Advance ``dq/dt = rhs(q, t)`` from t_start to t_end.

    Observers are called as ``obs(step_index, t, q)`` after the initial state
    and after every accepted step.  With ``adaptive=False``, ``dt_init`` is
    used verbatim (only shortened to land on t_end) and the error estimate is
    recorded but not enforced.
    """
    t = config.t_start
    q = np.array(q0, dtype=float, copy=True)
    span = config.t_end - config.t_start
    dt = config.dt_init if config.dt_init is not None else min(span, config.dt_max)

    k1 = rhs(q, t)
    n_rhs = 1
    result = IntegrationResult(t=t, q=q, n_accepted=0, n_rejected=0, n_rhs=0)
    for obs in observers:
        obs(0, t, q)

    while t < config.t_end - 1e-14 * span:
        if (config.stop_after_accepted is not None
                and result.n_accepted >= config.stop_after_accepted):
            break
        if result.n_accepted + result.n_rejected >= config.max_steps:
            raise IntegrationError(f"exceeded {config.max_steps} steps at t={t}")
        dt = min(dt, config.dt_max, config.t_end - t)
        if dt < 1e-14 * span:
            raise IntegrationError(
                f"step size underflow (dt={dt:.3e}) at t={t:.6e}; the system "
                "is too stiff for the explicit integrator or the state is "
                "approaching a nonphysical region")

        try:
            k2 = rhs(q + (dt * _A21) * k1, t + _C[1] * dt)
            k3 = rhs(q + (dt * _A32) * k2, t + _C[2] * dt)
            q_new = q + dt * (_B[0] * k1 + _B[1] * k2 + _B[2] * k3)
            k4 = rhs(q_new, t + dt)
            n_rhs += 3
        except NonphysicalStateError:
            # An overambitious trial step left the physical set: reject it.
            result.n_rejected += 1
            if record_steps:
                result.steps.append(StepRecord(t=t, dt=dt, accepted=False,
                                               error=np.inf))
            dt = dt * config.ratio_min
            continue
        err_vec = dt * (_E[0] * k1 + _E[1] * k2 + _E[2] * k3 + _E[3] * k4)
        err = _error_norm(err_vec, q, q_new, config.rtol, config.atol)

        accept = (not config.adaptive) or err <= 1.0
        if not np.isfinite(err):
            accept = False
        if record_steps:
            result.steps.append(StepRecord(t=t, dt=dt, accepted=accept,
                                           error=err))
        if accept:
            t = t + dt
            q = q_new
            k1 = k4  # FSAL
            result.n_accepted += 1
            for obs in observers:
                obs(result.n_accepted, t, q)
            if config.adaptive:
                if err == 0.0:
                    ratio = config.ratio_max
                else:
                    ratio = config.safety * err ** (-1.0 / 3.0)
                dt = dt * min(config.ratio_max, max(config.ratio_min, ratio))
        else:
            result.n_rejected += 1
            if np.isfinite(err) and err > 0.0:
                ratio = config.safety * err ** (-1.0 / 3.0)
            else:
                ratio = config.ratio_min
            # Rejected steps halve, bounded below by the minimum ratio;
            # the k1 stage still belongs to (q, t) and stays valid.
            dt = dt * min(0.5, max(config.ratio_min, ratio))

    result.t = t
    result.q = q
    result.n_rhs = n_rhs
    return result
