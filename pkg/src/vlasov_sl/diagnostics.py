"""Discrete conserved quantities and benchmark observables."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .field import FieldState, first_mode_magnitude
from .grid import PhaseGrid


@dataclass
class DiagnosticsRecord:
    t: float
    Q: float
    moments: dict[int, float] = field(default_factory=dict)
    energy: float = 0.0
    first_mode: float = 0.0
    energy_drift: float = 0.0

    def moment(self, r: int) -> float:
        return self.Q if r == 0 else self.moments[r]


def mass(coeffs: np.ndarray, grid: PhaseGrid) -> float:
    """``Q = dx sum_n sum_m c_nm w_m``."""
    return grid.dx * float(np.sum(coeffs @ grid.v_weights))


def moment(coeffs: np.ndarray, grid: PhaseGrid, r: int) -> float:
    """``Q_r = dx sum_n sum_m v_m^r c_nm w_m`` with physical velocities.

    Exact conservation is only expected for ``r <= M`` (Legendre) and
    ``r <= M + 2`` (Hermite); for a periodic velocity basis the value is
    reported but carries no guarantee.
    """
    if r < 0:
        raise ValueError("moment order must be non-negative")
    if r == 0:
        return mass(coeffs, grid)
    return grid.dx * float(np.sum(coeffs @ (grid.v_phys ** r * grid.v_weights)))


def total_energy(coeffs: np.ndarray, field: FieldState, grid: PhaseGrid) -> float:
    kinetic = moment(coeffs, grid, 2)
    potential = grid.dx * float(np.sum(field.values ** 2))
    return 0.5 * (kinetic + potential)


def drift(energies) -> np.ndarray:
    """Relative deviation ``|E_k - E_0| / |E_0|`` of a series."""
    e = np.asarray(energies, dtype=float)
    if e.size == 0:
        return e
    if e[0] == 0:
        raise ZeroDivisionError("energy drift undefined for zero initial energy")
    return np.abs(e - e[0]) / abs(e[0])


def record(t: float, coeffs: np.ndarray, field: FieldState, grid: PhaseGrid,
           orders=(1, 2), energy0: float | None = None) -> DiagnosticsRecord:
    energy = total_energy(coeffs, field, grid)
    if energy0 is None:
        energy0 = energy
    rel = abs(energy - energy0) / abs(energy0) if energy0 else 0.0
    return DiagnosticsRecord(
        t=t, Q=mass(coeffs, grid),
        moments={r: moment(coeffs, grid, r) for r in orders if r != 0},
        energy=energy, first_mode=first_mode_magnitude(field), energy_drift=rel,
    )
