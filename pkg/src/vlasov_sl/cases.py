"""Non-simulation cases: interpolation study and manufactured-solution convergence."""
from __future__ import annotations

import dataclasses
import math

import numpy as np

from . import manufactured
from .basis import BasisKind, interpolate_function
from .config import BDF2Field, CaseName, SimConfig, Stepper, TwoStreamDatum
from .grid import make_grid
from .stepper import advance

INTERP_POINTS = 1001
INTERP_INTERVAL = (-5.0, 5.0)


def interpolation_profile(datum: TwoStreamDatum | None = None):
    """Velocity profile of the two-stream datum (unnormalised double Gaussian)."""
    return (datum or TwoStreamDatum()).velocity_profile


def interpolate_profile(kind: BasisKind | str, M: int, alpha: float = 1.0,
                        datum: TwoStreamDatum | None = None,
                        points: int = INTERP_POINTS) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Interpolate the profile on ``[-5, 5]`` from basis nodes.

    Fourier and Legendre nodes are mapped affinely onto ``[-5, 5]``; Hermite
    nodes are used unmapped. Returns ``(v, exact, interpolant)``.
    """
    kind = BasisKind.parse(kind)
    xi = interpolation_profile(datum)
    v_extent = None if kind is BasisKind.HERMITE else INTERP_INTERVAL
    grid = make_grid(4, M, kind, alpha, v_extent=v_extent)
    v = np.linspace(*INTERP_INTERVAL, points)
    samples = xi(grid.v_phys)
    approx = interpolate_function(grid.velocity, samples, grid.v_unmap(v))
    return v, xi(v), approx


def sup_error(kind, M, alpha=1.0, datum=None) -> float:
    _, exact, approx = interpolate_profile(kind, M, alpha, datum)
    return float(np.max(np.abs(approx - exact)))


def interpolation_study(config: SimConfig) -> tuple[list[dict], dict[str, tuple]]:
    """Error table and curves for each basis at ``M`` and ``2M``.

    Hermite is repeated for every value in ``config.alphas`` (and ``alpha=1``).
    """
    rows, curves = [], {}
    alphas = sorted(set(config.alphas) | {1.0})
    for M in (config.M, 2 * config.M):
        runs = [(BasisKind.FOURIER, 1.0), (BasisKind.LEGENDRE, 1.0)]
        runs += [(BasisKind.HERMITE, a) for a in alphas]
        for kind, alpha in runs:
            v, exact, approx = interpolate_profile(kind, M, alpha, config.datum)
            err = np.abs(approx - exact)
            rows.append(dict(basis=kind.value, M=M, alpha=float(alpha),
                             sup_error=float(err.max()),
                             l2_error=float(math.sqrt(np.sum(err ** 2) * (v[1] - v[0])))))
            curves[f"{kind.value}_M{M}_alpha{alpha:g}"] = (v, exact, approx)
    return rows, curves


def manufactured_config(stepper: Stepper | str, dt: float, N: int = 16, M: int = 16,
                        t_end: float = 1.0,
                        bdf2_field: BDF2Field | str = BDF2Field.LAGGED) -> SimConfig:
    return SimConfig(
        case=CaseName.MANUFACTURED_CONVERGENCE, basis=BasisKind.FOURIER, N=N, M=M,
        x_extent=manufactured.X_EXTENT, v_extent=manufactured.V_EXTENT,
        dt=dt, t_end=t_end, stepper=stepper, bdf2_field=bdf2_field,
        forcing=manufactured.forcing, initial_datum=manufactured.initial_datum,
        diag_every=max(1, int(round(t_end / dt))),
    )


def manufactured_error(cfg: SimConfig) -> float:
    """Max nodal error against the exact solution at ``t_end``."""
    run = advance(cfg)
    X, V = np.meshgrid(run.grid.x_phys, run.grid.v_phys, indexing="ij")
    exact = manufactured.exact_f(cfg.t_end, X, V)
    return float(np.max(np.abs(run.final_state.coeffs - exact)))


def convergence_slope(dts, errors) -> float:
    return float(np.polyfit(np.log(dts), np.log(errors), 1)[0])


def manufactured_convergence(config: SimConfig, steppers=(Stepper.EULER, Stepper.BDF2)
                             ) -> tuple[list[dict], dict[str, float]]:
    rows, slopes = [], {}
    for st in steppers:
        errs = []
        for dt in config.dt_ladder:
            cfg = manufactured_config(st, dt, config.N, config.M, config.t_end,
                                      config.bdf2_field)
            err = manufactured_error(cfg)
            errs.append(err)
            rows.append(dict(stepper=Stepper(st).value, dt=float(dt), error=err))
        slopes[Stepper(st).value] = convergence_slope(config.dt_ladder, errs)
    return rows, slopes


def with_overrides(config: SimConfig, **kw) -> SimConfig:
    return dataclasses.replace(config, **kw)
