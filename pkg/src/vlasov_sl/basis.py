"""Nodal bases for the phase-space discretization.

Space is always periodic (trigonometric Lagrangian basis on ``N`` equispaced
nodes). Velocity uses one of three nodal bases:

* ``FOURIER``  -- periodic, equispaced nodes on ``[0, 2pi)``;
* ``LEGENDRE`` -- the ``M`` zeros of ``P'_{M+1}`` in ``(-1, 1)``, with basis
  functions that vanish at ``v = +-1``;
* ``HERMITE``  -- the ``M`` zeros of ``H_M``, stretched by ``1/alpha``, with
  weight ``exp(-alpha**2 v**2)``.

Nodes for the polynomial bases come from the symmetric Jacobi matrix of the
three-term recurrence (Golub-Welsch) and are then Newton-polished.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BasisKind",
    "NodeSolverError",
    "SpaceBasis",
    "VelocityBasis",
    "build_space_basis",
    "build_velocity_basis",
    "diff_matrix",
    "eval_lagrangian",
    "interpolate_function",
    "hermite_poly",
    "legendre_poly",
]


class BasisKind(str, enum.Enum):
    FOURIER = "fourier"
    LEGENDRE = "legendre"
    HERMITE = "hermite"

    @classmethod
    def parse(cls, value: "str | BasisKind") -> "BasisKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(
                f"unknown basis {value!r}; expected one of "
                f"{[k.value for k in cls]}") from None


class NodeSolverError(RuntimeError):
    """Newton polishing of quadrature nodes failed to converge."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SpaceBasis:
    """Periodic trigonometric basis on ``x_i = 2 pi i / N``."""

    N: int
    nodes: np.ndarray
    diff1: np.ndarray

    @property
    def size(self) -> int:
        return self.N


@dataclass(frozen=True, eq=False)
class VelocityBasis:
    """Velocity nodes, quadrature and first-derivative matrix.

    ``nodes`` are reference coordinates: ``[0, 2pi)`` for Fourier, ``(-1, 1)``
    for Legendre and the real line for Hermite. ``quad_weights`` integrate
    against ``weight_at_nodes``' underlying weight function (``1`` for Fourier
    and Legendre, ``exp(-alpha^2 v^2)`` for Hermite).
    """

    kind: BasisKind
    M: int
    alpha: float
    nodes: np.ndarray
    quad_weights: np.ndarray
    diff1: np.ndarray
    weight_at_nodes: np.ndarray
    # barycentric weights of the polynomial interpolant (unused for Fourier)
    bary_weights: np.ndarray

    @property
    def size(self) -> int:
        return self.M


# ---------------------------------------------------------------------------
# Orthogonal polynomial evaluation


def hermite_poly(n: int, t: np.ndarray | float) -> tuple[np.ndarray, np.ndarray]:
    """Physicists' Hermite ``H_n(t)`` and ``H_n'(t)`` by recurrence."""
    t = np.asarray(t, dtype=float)
    h_prev = np.ones_like(t)
    if n == 0:
        return h_prev, np.zeros_like(t)
    h = 2.0 * t
    for k in range(1, n):
        h_prev, h = h, 2.0 * t * h - 2.0 * k * h_prev
    return h, 2.0 * n * h_prev


def legendre_poly(n: int, t: np.ndarray | float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``P_n``, ``P_n'`` and ``P_n''`` at ``t`` (``|t| < 1`` for the derivatives)."""
    t = np.asarray(t, dtype=float)
    p_prev = np.ones_like(t)
    if n == 0:
        z = np.zeros_like(t)
        return p_prev, z, z
    p = t.copy()
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * t * p - k * p_prev) / (k + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        dp = n * (t * p - p_prev) / (t * t - 1.0)
        d2p = (2.0 * t * dp - n * (n + 1) * p) / (1.0 - t * t)
    return p, dp, d2p


# ---------------------------------------------------------------------------
# Nodes


def _golub_welsch(diag: np.ndarray, offdiag: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    J = np.diag(diag) + np.diag(offdiag, 1) + np.diag(offdiag, -1)
    z, V = np.linalg.eigh(J)
    return z, V[0, :] ** 2


def _newton_polish(z: np.ndarray, f_df, tol: float = 1e-14, maxiter: int = 50) -> np.ndarray:
    z = z.copy()
    for _ in range(maxiter):
        f, df = f_df(z)
        step = f / df
        z -= step
        if np.all(np.abs(step) <= tol * np.maximum(1.0, np.abs(z))):
            return z
    f, df = f_df(z)
    # a node counts as converged once the Newton correction is at round-off level
    if np.all(np.abs(f / df) <= 1e-12 * np.maximum(1.0, np.abs(z))):
        return z
    raise NodeSolverError(f"Newton polish did not converge in {maxiter} iterations")


def hermite_nodes(M: int) -> tuple[np.ndarray, np.ndarray]:
    """Zeros of ``H_M`` and Gauss-Hermite weights for ``exp(-t^2)``."""
    k = np.arange(1, M)
    z, _ = _golub_welsch(np.zeros(M), np.sqrt(k / 2.0))

    def f_df(t):
        # normalised recurrence keeps values O(1) for large M
        return _hermite_normalised(M, t)

    z = _newton_polish(z, f_df)
    z = 0.5 * (z - z[::-1])  # exact symmetry
    # w_j = 2^{M-1} M! sqrt(pi) / (M^2 H_{M-1}(t_j)^2), in normalised form
    psi_prev = _hermite_normalised(M - 1, z)[0]
    w = 1.0 / (M * psi_prev ** 2)
    if abs(w.sum() - math.sqrt(math.pi)) > 1e-10:
        raise NodeSolverError("Gauss-Hermite weights do not sum to sqrt(pi)")
    return z, w


def _hermite_normalised(n: int, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``h_n = H_n / sqrt(2^n n! sqrt(pi))`` and its derivative."""
    t = np.asarray(t, dtype=float)
    h_prev = np.full_like(t, math.pi ** -0.25)
    if n == 0:
        return h_prev, np.zeros_like(t)
    h = math.sqrt(2.0) * t * h_prev
    for k in range(1, n):
        h_prev, h = h, math.sqrt(2.0 / (k + 1)) * t * h - math.sqrt(k / (k + 1)) * h_prev
    return h, math.sqrt(2.0 * n) * h_prev


def legendre_interior_nodes(M: int) -> tuple[np.ndarray, np.ndarray]:
    """Zeros of ``P'_{M+1}`` and the matching interior Gauss-Lobatto weights."""
    n = np.arange(1, M, dtype=float)
    # Jacobi (1, 1) recurrence: P'_{M+1} is proportional to P^{(1,1)}_M
    z, _ = _golub_welsch(np.zeros(M), np.sqrt(n * (n + 2) / ((2 * n + 1) * (2 * n + 3))))

    def f_df(t):
        _, dp, d2p = legendre_poly(M + 1, t)
        return dp, d2p

    z = _newton_polish(z, f_df)
    z = 0.5 * (z - z[::-1])
    p = legendre_poly(M + 1, z)[0]
    w = 2.0 / ((M + 1) * (M + 2) * p ** 2)
    return z, w


# ---------------------------------------------------------------------------
# Differentiation matrices


def _fourier_diff(n: int, s: int = 1) -> np.ndarray:
    h = 2.0 * np.pi / n
    idx = np.arange(n)
    k = idx[:, None] - idx[None, :]
    sign = np.where(k % 2 == 0, 1.0, -1.0)
    half = 0.5 * h * k
    off = k != 0
    D = np.zeros((n, n))
    if s == 0:
        return np.eye(n)
    if s == 1:
        D[off] = 0.5 * sign[off] / np.tan(half[off])
        return D
    if s == 2:
        D[off] = -0.5 * sign[off] / np.sin(half[off]) ** 2
        np.fill_diagonal(D, -np.pi ** 2 / (3.0 * h ** 2) - 1.0 / 6.0)
        return D
    raise ValueError("derivative order must be 0, 1 or 2")


def _bary_weights(x: np.ndarray) -> np.ndarray:
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    # log-sum to avoid under/overflow of the product
    logw = -np.sum(np.log(np.abs(diff)), axis=1)
    sign = np.prod(np.sign(diff), axis=1)
    logw -= logw.max()
    return sign * np.exp(logw)


def _poly_diff(x: np.ndarray, w: np.ndarray) -> np.ndarray:
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    D = (w[None, :] / w[:, None]) / diff
    np.fill_diagonal(D, 0.0)
    np.fill_diagonal(D, [-math.fsum(row) for row in D])
    return D


def _legendre_full_nodes(nodes: np.ndarray) -> np.ndarray:
    return np.concatenate(([-1.0], nodes, [1.0]))


def diff_matrix(basis: SpaceBasis | VelocityBasis, s: int = 1) -> np.ndarray:
    """Matrix ``d^(s)``: nodal values to nodal values of the ``s``-th derivative.

    For Legendre the basis functions vanish at ``+-1``; derivatives are taken
    on the full Gauss-Lobatto node set with zero end values and restricted to
    the interior, which keeps ``s = 2`` exact.
    """
    if s not in (0, 1, 2):
        raise ValueError("derivative order must be 0, 1 or 2")
    n = basis.size
    if s == 0:
        return np.eye(n)
    if isinstance(basis, SpaceBasis) or basis.kind is BasisKind.FOURIER:
        return _fourier_diff(n, s)
    if basis.kind is BasisKind.LEGENDRE:
        full = _legendre_full_nodes(basis.nodes)
        Df = _poly_diff(full, _bary_weights(full))
        Ds = np.linalg.matrix_power(Df, s)
        return Ds[1:-1, 1:-1]
    t = basis.nodes * basis.alpha
    D1 = _poly_diff(t, basis.bary_weights)
    return np.linalg.matrix_power(D1, s) * basis.alpha ** s


# ---------------------------------------------------------------------------
# Builders


def build_space_basis(N: int) -> SpaceBasis:
    if int(N) != N or N < 4 or N % 2:
        raise ValueError(f"N must be an even integer >= 4, got {N}")
    N = int(N)
    nodes = 2.0 * np.pi * np.arange(N) / N
    return SpaceBasis(N=N, nodes=_frozen(nodes), diff1=_frozen(_fourier_diff(N, 1)))


def build_velocity_basis(kind: BasisKind | str, M: int, alpha: float = 1.0) -> VelocityBasis:
    kind = BasisKind.parse(kind)
    if int(M) != M or M < 4:
        raise ValueError(f"M must be an integer >= 4, got {M}")
    M = int(M)
    alpha = float(alpha)
    if not alpha > 0 or not math.isfinite(alpha):
        raise ValueError(f"alpha must be positive, got {alpha}")
    if kind is not BasisKind.HERMITE and alpha != 1.0:
        raise ValueError(f"alpha applies to the Hermite basis only (got alpha={alpha} for {kind.value})")

    if kind is BasisKind.FOURIER:
        nodes = 2.0 * np.pi * np.arange(M) / M
        weights = np.full(M, 2.0 * np.pi / M)
        D = _fourier_diff(M, 1)
        omega = np.ones(M)
        bary = np.where(np.arange(M) % 2 == 0, 1.0, -1.0)
    elif kind is BasisKind.LEGENDRE:
        nodes, weights = legendre_interior_nodes(M)
        full = _legendre_full_nodes(nodes)
        D = _poly_diff(full, _bary_weights(full))[1:-1, 1:-1]
        omega = np.ones(M)
        bary = _bary_weights(nodes)
    else:
        t, w1 = hermite_nodes(M)
        bary = _bary_weights(t)
        nodes = t / alpha
        weights = w1 / alpha
        D = _poly_diff(t, bary) * alpha
        omega = np.exp(-(t ** 2))

    return VelocityBasis(
        kind=kind, M=M, alpha=alpha,
        nodes=_frozen(nodes), quad_weights=_frozen(weights),
        diff1=_frozen(D), weight_at_nodes=_frozen(omega),
        bary_weights=_frozen(bary),
    )


# ---------------------------------------------------------------------------
# Evaluation


def _trig_cardinal(n: int, xj: float, x: np.ndarray) -> np.ndarray:
    d = x - xj
    out = np.empty_like(d)
    small = np.abs(np.sin(0.5 * d)) < 1e-15
    ds = d[~small]
    out[~small] = np.sin(0.5 * n * ds) / (n * np.tan(0.5 * ds))
    out[small] = 1.0
    return out


def eval_lagrangian(basis: SpaceBasis | VelocityBasis, j: int, v) -> np.ndarray | float:
    """Evaluate the ``j``-th cardinal function at ``v`` (reference coordinates).

    Uses the closed forms directly (trigonometric ``sin cot`` form, the
    Legendre boundary-vanishing quotient, and ``H_M / ((v - v_j) H_M'(v_j))``).
    Points that coincide with a node return the Kronecker delta.
    """
    n = basis.size
    if not 0 <= j < n:
        raise IndexError(f"basis index {j} out of range [0, {n})")
    scalar = np.ndim(v) == 0
    v = np.atleast_1d(np.asarray(v, dtype=float))
    nodes = basis.nodes
    if isinstance(basis, SpaceBasis) or basis.kind is BasisKind.FOURIER:
        out = _trig_cardinal(n, nodes[j], v)
    else:
        if basis.kind is BasisKind.LEGENDRE:
            M = basis.M
            # (v^2 - 1) P'_{M+1} = (M+1) (v P_{M+1} - P_M), regular at the endpoints
            bubble = (M + 1) * (v * legendre_poly(M + 1, v)[0] - legendre_poly(M, v)[0])
            pj = legendre_poly(M + 1, nodes[j])[0]
            with np.errstate(divide="ignore", invalid="ignore"):
                out = bubble / ((M + 1) * (M + 2) * (v - nodes[j]) * pj)
        else:
            a = basis.alpha
            t, tj = a * v, a * nodes[j]
            h, _ = hermite_poly(basis.M, t)
            _, dhj = hermite_poly(basis.M, tj)
            with np.errstate(divide="ignore", invalid="ignore"):
                out = h / ((t - tj) * dhj)
        on_node = np.isclose(v[:, None], nodes[None, :], rtol=0.0, atol=1e-14)
        hit = on_node.any(axis=1)
        out[hit] = on_node[hit, j].astype(float)
    return float(out[0]) if scalar else out


def interpolate_function(basis: VelocityBasis | SpaceBasis, samples, eval_points) -> np.ndarray:
    """Evaluate the nodal interpolant of ``samples`` at ``eval_points``.

    ``eval_points`` are reference coordinates. For Hermite, ``samples`` are
    values of ``f`` and the interpolant is ``q(v) exp(-alpha^2 v^2)`` with
    ``q`` the polynomial through ``f exp(alpha^2 v^2)``.
    """
    samples = np.asarray(samples, dtype=float)
    n = basis.size
    if samples.shape != (n,):
        raise ValueError(f"expected {n} samples, got shape {samples.shape}")
    x = np.atleast_1d(np.asarray(eval_points, dtype=float))
    nodes = basis.nodes

    if isinstance(basis, SpaceBasis) or basis.kind is BasisKind.FOURIER:
        # barycentric trigonometric formula for an even number of nodes
        sign = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
        half = 0.5 * (x[:, None] - nodes[None, :])
        with np.errstate(divide="ignore", invalid="ignore"):
            c = sign[None, :] / np.tan(half)
            out = (c @ samples) / c.sum(axis=1)
        hit = np.abs(np.sin(half)) < 1e-15
    elif basis.kind is BasisKind.LEGENDRE:
        full = _legendre_full_nodes(nodes)
        w = _bary_weights(full)
        vals = np.concatenate(([0.0], samples, [0.0]))
        d = x[:, None] - full[None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            c = w[None, :] / d
            out = (c @ vals) / c.sum(axis=1)
        hit = np.abs(d[:, 1:-1]) < 1e-14
        ends = np.abs(d[:, [0, -1]]).min(axis=1) < 1e-14
        out[ends] = 0.0
    else:
        a = basis.alpha
        t_nodes = a * nodes
        p = samples * np.exp(t_nodes ** 2)
        d = a * x[:, None] - t_nodes[None, :]
        w = basis.bary_weights
        with np.errstate(divide="ignore", invalid="ignore"):
            c = w[None, :] / d
            out = (c @ p) / c.sum(axis=1) * np.exp(-(a * x) ** 2)
        hit = np.abs(d) < 1e-14
    rows, cols = np.nonzero(hit)
    out[rows] = samples[cols]
    return out
