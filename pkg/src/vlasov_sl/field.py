"""Charge density and the periodic field equation ``dE/dx = 1 - rho``."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .grid import PhaseGrid

CHARGE_IMBALANCE_TOL = 1e-8


class ChargeImbalanceWarning(UserWarning):
    """The discrete mean of ``1 - rho`` is not zero and was projected out."""


@dataclass(frozen=True, eq=False)
class DensityProfile:
    values: np.ndarray


@dataclass(frozen=True, eq=False)
class FieldState:
    """Electric field at the x-nodes and its mode coefficients.

    With ``x`` the reference coordinate on ``[0, 2pi)``::

        E(x) = -sum_{n=1}^{N/2} (1/n) [sin_coeffs[n-1] sin(nx) - cos_coeffs[n-1] cos(nx)]

    ``charge_imbalance`` is the mean of ``1 - rho`` that was removed.
    """

    values: np.ndarray
    sin_coeffs: np.ndarray
    cos_coeffs: np.ndarray
    charge_imbalance: float = 0.0
    mean: float = 0.0

    def evaluate(self, x_ref) -> np.ndarray:
        x = np.asarray(x_ref, dtype=float)
        n = np.arange(1, self.sin_coeffs.size + 1)
        arg = np.multiply.outer(x, n)
        return -(np.sin(arg) @ (self.sin_coeffs / n) - np.cos(arg) @ (self.cos_coeffs / n))


def compute_density(coeffs: np.ndarray, grid: PhaseGrid) -> DensityProfile:
    """``rho(x_i) = sum_j c_ij w_j`` with physical velocity weights.

    In the Hermite p-representation the Gaussian is already carried by the
    weights, so the same sum applies.
    """
    coeffs = np.asarray(coeffs)
    if not np.all(np.isfinite(coeffs)):
        raise FloatingPointError("non-finite distribution coefficients")
    return DensityProfile(coeffs @ grid.v_weights)


def zero_field(N: int) -> FieldState:
    half = N // 2
    return FieldState(np.zeros(N), np.zeros(half), np.zeros(half))


def solve_field(rho: DensityProfile | np.ndarray, grid: PhaseGrid) -> FieldState:
    """Zero-mean periodic antiderivative of ``1 - rho`` in physical x.

    ``sin_coeffs`` (a_n) and ``cos_coeffs`` (b_n) are the cosine and sine
    coefficients of ``rho`` on the reference interval, divided by
    ``x_scale``, so that the displayed series satisfies ``E' = 1 - rho``.
    """
    values = rho.values if isinstance(rho, DensityProfile) else np.asarray(rho, dtype=float)
    N = values.size
    source = 1.0 - values
    imbalance = float(source.mean())
    if abs(imbalance) > CHARGE_IMBALANCE_TOL:
        warnings.warn(f"charge imbalance {imbalance:.3e} removed before field solve",
                      ChargeImbalanceWarning, stacklevel=2)

    rhat = np.fft.rfft(values)  # sum_i rho_i exp(-i n x_i)
    n = np.arange(1, N // 2 + 1)
    cos_rho = 2.0 * rhat[1:].real / N
    sin_rho = -2.0 * rhat[1:].imag / N
    cos_rho[-1] *= 0.5  # Nyquist cosine is counted once
    sin_rho[-1] = 0.0
    a = cos_rho / grid.x_scale
    b = sin_rho / grid.x_scale

    x = grid.space.nodes
    arg = np.outer(x, n)
    E = -(np.sin(arg) @ (a / n) - np.cos(arg) @ (b / n))
    return FieldState(E, a, b, charge_imbalance=imbalance)


def first_mode_magnitude(field: FieldState) -> float:
    """``|a_1|``, the amplitude of the fundamental sine mode of ``E``."""
    return float(abs(field.sin_coeffs[0]))
