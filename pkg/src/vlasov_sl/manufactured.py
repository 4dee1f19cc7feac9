"""Manufactured solution for temporal order checks.

On ``x in [0, 2pi)`` and periodic ``v in [-pi, pi)``::

    f(t, x, v) = (1 + eps(t) cos(x - t) (1 + sin v)) / (2 pi),   eps(t) = A exp(-t)

gives ``rho = 1 + eps cos(x - t)`` and the zero-mean field
``E = -eps sin(x - t)``. The forcing ``g = f_t + v f_x - E f_v`` makes ``f``
an exact solution of the forced Vlasov-Poisson system. Everything is
band-limited, so the spatial discretization is exact on a Fourier-Fourier
grid and the remaining error is purely temporal.
"""
from __future__ import annotations

import math

import numpy as np

AMPLITUDE = 0.5
X_EXTENT = (0.0, 2.0 * math.pi)
V_EXTENT = (-math.pi, math.pi)


def eps(t: float) -> float:
    return AMPLITUDE * math.exp(-t)


def exact_f(t: float, x, v):
    return (1.0 + eps(t) * np.cos(x - t) * (1.0 + np.sin(v))) / (2.0 * math.pi)


def exact_field(t: float, x):
    return -eps(t) * np.sin(x - t)


def forcing(t: float, x, v):
    e = eps(t)
    ph = x - t
    f_t = (-e * np.cos(ph) + e * np.sin(ph)) * (1.0 + np.sin(v))
    f_x = -e * np.sin(ph) * (1.0 + np.sin(v))
    f_v = e * np.cos(ph) * np.cos(v)
    E = -e * np.sin(ph)
    return (f_t + v * f_x - E * f_v) / (2.0 * math.pi)


def initial_datum(x, v):
    return exact_f(0.0, x, v)
