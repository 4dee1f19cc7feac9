"""Semi-Lagrangian tendency, Euler and BDF2 steps, and the time loop.

One step backtracks each node ``(x_n, v_m)`` along the first-order
characteristic and Taylor-expands the nodal interpolant to first order in
``dt``. In coefficient form::

    c^{k+1} = c^k + dt * Phi(c^k, E^k) + dt * g(t^k)

with ``Phi_nm = -v_m (D_x c)_nm + E_n (D_v c)_nm``. BDF2 combines one- and
two-step backtracks with weights 4/3 and -1/3.
"""
from __future__ import annotations

import enum
import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .basis import BasisKind
from .config import BDF2Field, SimConfig, Stepper
from .diagnostics import DiagnosticsRecord, record
from .field import ChargeImbalanceWarning, FieldState, compute_density, solve_field
from .grid import PhaseGrid, build_grid

log = logging.getLogger(__name__)

BLOWUP_LIMIT = 1e12


class Representation(str, enum.Enum):
    F = "f"
    HERMITE_P = "hermite_p"


@dataclass
class DistributionState:
    """Nodal coefficients ``c_nm`` at step ``k``.

    In the Hermite p-representation ``c_nm = f(x_n, v_m) exp(alpha^2 v_m^2)``.
    """

    coeffs: np.ndarray
    step_index: int = 0
    representation: Representation = Representation.F

    def f_values(self, grid: PhaseGrid) -> np.ndarray:
        if self.representation is Representation.HERMITE_P:
            return self.coeffs * grid.velocity.weight_at_nodes[None, :]
        return self.coeffs


class InstabilityError(FloatingPointError):
    """Coefficients became non-finite or exceeded :data:`BLOWUP_LIMIT`."""

    def __init__(self, report: dict, run: "Optional[RunRecord]" = None):
        self.report = report
        self.run = run
        super().__init__(
            f"instability at step {report['step']} (t={report['t']:.6g}, "
            f"basis={report['basis']}): max|c|={report['max_abs_coeff']:.3e}")


def representation_for(grid: PhaseGrid) -> Representation:
    return Representation.HERMITE_P if grid.kind is BasisKind.HERMITE else Representation.F


def initialize_state(config: SimConfig, grid: PhaseGrid) -> DistributionState:
    X, V = np.meshgrid(grid.x_phys, grid.v_phys, indexing="ij")
    f0 = np.asarray(config.datum_function()(X, V), dtype=float)
    f0 = np.broadcast_to(f0, X.shape).copy()
    if not np.all(np.isfinite(f0)):
        raise ValueError("initial datum produced non-finite samples")
    rep = representation_for(grid)
    if rep is Representation.HERMITE_P:
        f0 = f0 / grid.velocity.weight_at_nodes[None, :]
    return DistributionState(f0, 0, rep)


def _v_operator(coeffs: np.ndarray, grid: PhaseGrid, rep: Representation) -> np.ndarray:
    dv = coeffs @ grid.velocity.diff1.T
    if rep is Representation.HERMITE_P:
        a2 = grid.velocity.alpha ** 2
        dv = dv - 2.0 * a2 * grid.v_phys[None, :] * coeffs
    return grid.v_scale * dv


def _x_operator(coeffs: np.ndarray, grid: PhaseGrid) -> np.ndarray:
    return grid.x_scale * (grid.space.diff1 @ coeffs)


def compute_phi(state: DistributionState | np.ndarray, field: FieldState, grid: PhaseGrid,
                representation: Representation | None = None) -> np.ndarray:
    """Tendency ``Phi_nm = -v_m dc/dx + E_n [dc/dv (- 2 alpha^2 v_m c for Hermite p)]``."""
    if isinstance(state, DistributionState):
        coeffs, rep = state.coeffs, state.representation
    else:
        coeffs = np.asarray(state, dtype=float)
        rep = representation or representation_for(grid)
    if coeffs.shape != (grid.N, grid.M) or field.values.shape != (grid.N,):
        raise ValueError(f"shape mismatch: coeffs {coeffs.shape}, field {field.values.shape}, "
                         f"grid ({grid.N}, {grid.M})")
    return (-grid.v_phys[None, :] * _x_operator(coeffs, grid)
            + field.values[:, None] * _v_operator(coeffs, grid, rep))


def _forcing(g, t: float, grid: PhaseGrid, rep: Representation) -> np.ndarray | float:
    if g is None:
        return 0.0
    X, V = np.meshgrid(grid.x_phys, grid.v_phys, indexing="ij")
    out = np.asarray(g(t, X, V), dtype=float)
    if rep is Representation.HERMITE_P:
        out = out / grid.velocity.weight_at_nodes[None, :]
    return out


def _check(coeffs: np.ndarray, step: int, t: float, grid: PhaseGrid) -> None:
    finite = np.all(np.isfinite(coeffs))
    peak = float(np.max(np.abs(coeffs))) if finite else math.inf
    if not finite or peak > BLOWUP_LIMIT:
        raise InstabilityError(dict(step=step, t=t, max_abs_coeff=peak,
                                    basis=grid.kind.value, alpha=grid.velocity.alpha,
                                    N=grid.N, M=grid.M))


def euler_step(state: DistributionState, field: FieldState, grid: PhaseGrid,
               g=None, t: float = 0.0, dt: float = 0.01) -> DistributionState:
    if not dt > 0:
        raise ValueError("dt must be positive")
    rep = state.representation
    c = state.coeffs + dt * compute_phi(state, field, grid) + dt * _forcing(g, t, grid, rep)
    _check(c, state.step_index + 1, t + dt, grid)
    return DistributionState(c, state.step_index + 1, rep)


def bdf2_step(state_k: DistributionState, state_km1: DistributionState, field_k: FieldState,
              grid: PhaseGrid, g=None, t_next: float = 0.0, dt: float = 0.01,
              field_km1: FieldState | None = None) -> DistributionState:
    """Two-step backward-differentiation update.

    With ``field_km1`` given, the two-step backtrack from ``c^(k-1)`` uses
    ``E^(k-1)`` (second order when the field changes in time). Without it,
    ``E^(k)`` multiplies ``2c^(k) - c^(k-1)`` as in the collapsed one-field
    formula.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    ck, ckm1 = state_k.coeffs, state_km1.coeffs
    rep = state_k.representation
    if ckm1.shape != ck.shape or state_km1.representation is not rep:
        raise ValueError("BDF2 states must share resolution and representation")
    if field_km1 is None:
        tendency = compute_phi(2.0 * ck - ckm1, field_k, grid, rep)
    else:
        tendency = (2.0 * compute_phi(ck, field_k, grid, rep)
                    - compute_phi(ckm1, field_km1, grid, rep))
    c = (4.0 / 3.0) * ck - (1.0 / 3.0) * ckm1 + (2.0 / 3.0) * dt * tendency
    if g is not None:
        c = c + (2.0 / 3.0) * dt * _forcing(g, t_next, grid, rep)
    _check(c, state_k.step_index + 1, t_next, grid)
    return DistributionState(c, state_k.step_index + 1, rep)


def cfl_max_dt(state: DistributionState, field: FieldState, grid: PhaseGrid,
               sigma: float, stepper: Stepper | str = Stepper.EULER) -> float:
    """Sufficient step bound ``2 pi / (N max|v| + M^sigma max|E|)``, halved for BDF2."""
    denom = grid.N * float(np.max(np.abs(grid.v_phys))) \
        + grid.M ** sigma * float(np.max(np.abs(field.values)))
    if denom == 0:
        return math.inf
    bound = 2.0 * math.pi / denom
    return 0.5 * bound if Stepper(stepper) is Stepper.BDF2 else bound


# ---------------------------------------------------------------------------
# Time loop


@dataclass
class RunRecord:
    config: SimConfig
    grid: PhaseGrid
    records: list[DiagnosticsRecord] = field(default_factory=list)
    final_state: Optional[DistributionState] = None
    final_field: Optional[FieldState] = None
    snapshots: dict[float, DistributionState] = field(default_factory=dict)
    steps: int = 0
    cfl_dt: float = math.inf
    instability: Optional[dict] = None

    def series(self, name: str) -> np.ndarray:
        if name.startswith("Q") and name[1:].isdigit():
            return np.array([r.moment(int(name[1:])) for r in self.records])
        return np.array([getattr(r, name) for r in self.records])


def field_of(state: DistributionState, grid: PhaseGrid) -> FieldState:
    return solve_field(compute_density(state.coeffs, grid), grid)


def advance(config: SimConfig, grid: PhaseGrid | None = None,
            raise_on_instability: bool = True) -> RunRecord:
    """Run the configured simulation.

    The field is recomputed from the density before every step. BDF2 starts
    from one Euler step, which leaves the discrete mass unchanged. On
    blow-up an :class:`InstabilityError` carrying the partial run is raised,
    unless ``raise_on_instability`` is false, in which case the partial run
    is returned with ``instability`` set.
    """
    grid = grid or build_grid(config)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ChargeImbalanceWarning)
        run = _advance(config, grid, raise_on_instability)
    imbalance = [w for w in caught if issubclass(w.category, ChargeImbalanceWarning)]
    for w in caught:
        if w not in imbalance:
            warnings.warn_explicit(w.message, w.category, w.filename, w.lineno)
    if imbalance:
        # one summary instead of a warning per step
        warnings.warn(f"{len(imbalance)} field solves saw a charge imbalance above "
                      f"tolerance (first: {imbalance[0].message})",
                      ChargeImbalanceWarning, stacklevel=2)
    return run


def _advance(config: SimConfig, grid: PhaseGrid, raise_on_instability: bool) -> RunRecord:
    dt, K = config.dt, config.n_steps
    # Q1 and Q2 always feed the time series; extra orders are optional
    orders = tuple(sorted((set(config.moments) | {1, 2}) - {0}))
    snap_steps = {int(round(t / dt)): t for t in config.snapshot_times if round(t / dt) <= K}

    state = initialize_state(config, grid)
    E = field_of(state, grid)
    run = RunRecord(config=config, grid=grid)
    first = record(0.0, state.coeffs, E, grid, orders)
    energy0 = first.energy
    run.records.append(first)
    run.cfl_dt = cfl_max_dt(state, E, grid, config.sigma, config.stepper)
    if dt > run.cfl_dt:
        log.info("dt=%g exceeds the CFL bound %.4g at t=0", dt, run.cfl_dt)
    if 0 in snap_steps:
        run.snapshots[snap_steps[0]] = state

    g = config.forcing
    prev_state: DistributionState | None = None
    prev_E: FieldState | None = None
    lagged = config.bdf2_field is BDF2Field.LAGGED
    try:
        for k in range(K):
            t = k * dt
            if config.stepper is Stepper.EULER or prev_state is None:
                new = euler_step(state, E, grid, g, t, dt)
            else:
                new = bdf2_step(state, prev_state, E, grid, g, t + dt, dt,
                                field_km1=prev_E if lagged else None)
            prev_state, prev_E = state, E
            state = new
            E = field_of(state, grid)
            step = k + 1
            if step % config.diag_every == 0 or step == K:
                run.records.append(record(step * dt, state.coeffs, E, grid, orders, energy0))
            if step in snap_steps:
                run.snapshots[snap_steps[step]] = state
            run.steps = step
    except InstabilityError as exc:
        run.final_state, run.final_field = state, E
        run.instability = exc.report
        exc.run = run
        log.warning("%s", exc)
        if raise_on_instability:
            raise
        return run
    run.final_state, run.final_field = state, E
    return run
