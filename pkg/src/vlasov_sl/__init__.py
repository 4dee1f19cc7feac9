"""Semi-Lagrangian spectral solver for the 1D-1V Vlasov-Poisson system."""
from .basis import (BasisKind, NodeSolverError, SpaceBasis, VelocityBasis, build_space_basis,
                    build_velocity_basis, diff_matrix, eval_lagrangian, interpolate_function)
from .config import (BDF2Field, CaseName, ConfigError, SimConfig, Stepper, TwoStreamDatum,
                     format_config, parse_config)
from .diagnostics import DiagnosticsRecord, mass, moment, total_energy
from .field import ChargeImbalanceWarning, FieldState, compute_density, solve_field
from .grid import PhaseGrid, build_grid, make_grid
from .stepper import (DistributionState, InstabilityError, Representation, RunRecord, advance,
                      bdf2_step, cfl_max_dt, compute_phi, euler_step)

__version__ = "0.1.0"

__all__ = [
    "BasisKind", "NodeSolverError", "SpaceBasis", "VelocityBasis", "build_space_basis",
    "build_velocity_basis", "diff_matrix", "eval_lagrangian", "interpolate_function",
    "BDF2Field", "CaseName", "ConfigError", "SimConfig", "Stepper", "TwoStreamDatum",
    "format_config", "parse_config", "DiagnosticsRecord", "mass", "moment", "total_energy",
    "ChargeImbalanceWarning", "FieldState", "compute_density", "solve_field", "PhaseGrid",
    "build_grid", "make_grid", "DistributionState", "InstabilityError", "Representation",
    "RunRecord", "advance", "bdf2_step", "cfl_max_dt", "compute_phi", "euler_step",
]
