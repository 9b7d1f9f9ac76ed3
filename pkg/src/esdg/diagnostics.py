r"""Discrete norms, conserved totals, and the entropy budget record.

The budget ties together one right-hand-side evaluation:

* ``dsdt``: P-weighted inner product of the entropy variables with dq/dt,
* ``dt_diss``: the interior dissipation ``sum_d |[Lambda]^{1/2} Theta_d|_P^2``
  (nonnegative: Lambda is SPD/PSD),
* ``xi``: the face/boundary contribution assembled from the same SAT data,
* ``boundary_data``: the face quadrature of the prescribed heat entropy flux.

``dsdt + dt_diss - xi`` is an algebraic identity of the discretization and
must vanish to roundoff for every state; with entropy-conservative coupling,
adiabatic walls and no interior penalty, ``xi`` itself is zero, so dS/dt and
DT cancel.  Norms follow the domain-volume-normalized discrete forms
``L1 = |O|^-1 sum 1^T P J |e|``, ``L2^2 = |O|^-1 sum e^T P J e``, ``Linf = max |e|``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class EntropyBudget:
    """Entropy-rate bookkeeping for one right-hand-side evaluation."""

    dsdt: float
    dt_diss: float
    xi: float
    boundary_data: float = 0.0

    @property
    def residual(self) -> float:
        """Identity defect dS/dt + DT - Xi (roundoff-level for any state)."""
        return self.dsdt + self.dt_diss - self.xi

    @property
    def scale(self) -> float:
        return max(1.0, abs(self.dsdt), abs(self.dt_diss), abs(self.xi))


def discrete_norms(grid, field: np.ndarray,
                   reference: np.ndarray) -> tuple[float, float, float]:
    """(L1, L2, Linf) of ``field - reference`` over the grid's nodes.

    Operates on scalar nodal arrays shaped (K, n, ..., n); the quadrature
    weight is P-tensor times the metric Jacobian, normalized by the domain
    volume.
    """
    if field.shape != reference.shape:
        raise ValueError(f"shape mismatch: {field.shape} vs {reference.shape}")
    err = field - reference
    w = grid.volume_weights()
    inv_vol = 1.0 / grid.volume
    l1 = inv_vol * float(np.sum(w * np.abs(err)))
    l2 = np.sqrt(inv_vol * float(np.sum(w * err * err)))
    linf = float(np.max(np.abs(err))) if err.size else 0.0
    return l1, l2, linf


def conserved_totals(grid, q: np.ndarray) -> np.ndarray:
    """P-weighted per-component totals, shape (nfields,)."""
    w = grid.volume_weights()
    return np.sum(w[..., None] * q, axis=tuple(range(q.ndim - 1)))


class BudgetTrace:
    """Accumulates one budget row per accepted step and writes the CSV trace."""

    HEADER = ("t", "dsdt", "dt_diss", "xi", "residual", "boundary_data")

    def __init__(self):
        self.rows: list[tuple] = []

    def record(self, t: float, budget: EntropyBudget) -> None:
        self.rows.append((t, budget.dsdt, budget.dt_diss, budget.xi,
                          budget.residual, budget.boundary_data))

    def max_conservation_defect(self) -> float:
        """max over steps of |dsdt + dt_diss| / max(1, |dsdt|, |dt_diss|)."""
        worst = 0.0
        for _, dsdt, dt_diss, _, _, _ in self.rows:
            denom = max(1.0, abs(dsdt), abs(dt_diss))
            worst = max(worst, abs(dsdt + dt_diss) / denom)
        return worst

    def max_identity_defect(self) -> float:
        worst = 0.0
        for _, dsdt, dt_diss, xi, resid, _ in self.rows:
            denom = max(1.0, abs(dsdt), abs(dt_diss), abs(xi))
            worst = max(worst, abs(resid) / denom)
        return worst

    def max_data_defect(self) -> float:
        """max over steps of |dsdt + dt_diss - boundary_data| / scale."""
        worst = 0.0
        for _, dsdt, dt_diss, _, _, bdata in self.rows:
            denom = max(1.0, abs(dsdt), abs(dt_diss), abs(bdata))
            worst = max(worst, abs(dsdt + dt_diss - bdata) / denom)
        return worst

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(self.HEADER)
            for row in self.rows:
                writer.writerow([f"{x:.17g}" for x in row])
