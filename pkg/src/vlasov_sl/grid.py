"""Physical phase-space domain and its affine maps onto the reference bases."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import BasisKind, SpaceBasis, VelocityBasis, build_space_basis, build_velocity_basis

# reference velocity intervals per basis; Hermite works on the real line unmapped
_V_REFERENCE = {
    BasisKind.FOURIER: (0.0, 2.0 * math.pi),
    BasisKind.LEGENDRE: (-1.0, 1.0),
}


@dataclass(frozen=True, eq=False)
class PhaseGrid:
    """Phase-space grid with chain-rule factors for the reference coordinates.

    ``x_scale = 2 pi / |Omega_x|`` multiplies x-derivatives taken on the
    reference interval ``[0, 2pi)``; ``v_scale`` multiplies v-derivatives taken
    in reference velocity. ``v_jacobian = 1 / v_scale`` converts reference
    quadrature weights to physical ones.
    """

    x_extent: tuple[float, float]
    v_extent: tuple[float, float] | None
    space: SpaceBasis
    velocity: VelocityBasis
    x_scale: float
    v_scale: float
    x_phys: np.ndarray
    v_phys: np.ndarray

    @property
    def N(self) -> int:
        return self.space.N

    @property
    def M(self) -> int:
        return self.velocity.M

    @property
    def kind(self) -> BasisKind:
        return self.velocity.kind

    @property
    def x_length(self) -> float:
        return self.x_extent[1] - self.x_extent[0]

    @property
    def v_jacobian(self) -> float:
        return 1.0 / self.v_scale

    @property
    def dx(self) -> float:
        """Physical trapezoid weight in x, ``|Omega_x| / N``."""
        return self.x_length / self.N

    @property
    def v_weights(self) -> np.ndarray:
        """Quadrature weights in physical velocity (map Jacobian applied)."""
        return self.velocity.quad_weights * self.v_jacobian

    def v_map(self, v_ref):
        v_ref = np.asarray(v_ref, dtype=float)
        if self.v_extent is None:
            return v_ref
        lo, _ = _V_REFERENCE[self.kind]
        return self.v_extent[0] + (v_ref - lo) * self.v_jacobian

    def v_unmap(self, v):
        v = np.asarray(v, dtype=float)
        if self.v_extent is None:
            return v
        lo, _ = _V_REFERENCE[self.kind]
        return lo + (v - self.v_extent[0]) * self.v_scale

    def x_map(self, x_ref):
        return self.x_extent[0] + np.asarray(x_ref, dtype=float) / self.x_scale

    def x_unmap(self, x):
        return (np.asarray(x, dtype=float) - self.x_extent[0]) * self.x_scale


def make_grid(N: int, M: int, kind: BasisKind | str, alpha: float = 1.0,
              x_extent: tuple[float, float] = (0.0, 2.0 * math.pi),
              v_extent: tuple[float, float] | None = None) -> PhaseGrid:
    kind = BasisKind.parse(kind)
    x0, x1 = map(float, x_extent)
    if not x1 > x0:
        raise ValueError(f"x extent must have positive length, got {x_extent}")
    if kind is BasisKind.HERMITE:
        if v_extent is not None:
            raise ValueError("the Hermite basis lives on the whole real line; "
                             "v_extent must not be given")
        v_scale = 1.0
    else:
        if v_extent is None:
            raise ValueError(f"{kind.value} basis needs a finite v_extent")
        v0, v1 = map(float, v_extent)
        if not v1 > v0:
            raise ValueError(f"v extent must have positive length, got {v_extent}")
        v_extent = (v0, v1)
        lo, hi = _V_REFERENCE[kind]
        v_scale = (hi - lo) / (v1 - v0)

    space = build_space_basis(N)
    velocity = build_velocity_basis(kind, M, alpha)
    grid = PhaseGrid(
        x_extent=(x0, x1), v_extent=v_extent, space=space, velocity=velocity,
        x_scale=2.0 * math.pi / (x1 - x0), v_scale=v_scale,
        x_phys=np.empty(0), v_phys=np.empty(0),
    )
    x_phys = grid.x_map(space.nodes)
    v_phys = grid.v_map(velocity.nodes)
    x_phys.setflags(write=False)
    v_phys.setflags(write=False)
    object.__setattr__(grid, "x_phys", x_phys)
    object.__setattr__(grid, "v_phys", v_phys)
    return grid


def build_grid(config) -> PhaseGrid:
    """Grid for a :class:`~vlasov_sl.config.SimConfig`."""
    return make_grid(config.N, config.M, config.basis, config.alpha,
                     config.x_extent, config.v_extent)
