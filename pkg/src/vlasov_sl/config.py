"""Simulation configuration, benchmark cases and the plain-text config format.

The config file holds one ``key=value`` per line; ``#`` starts a comment.
Case defaults are applied first, then the explicit keys.
"""
from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .basis import BasisKind

Forcing = Callable[[float, np.ndarray, np.ndarray], np.ndarray]
Datum = Callable[[np.ndarray, np.ndarray], np.ndarray]


class ConfigError(ValueError):
    """Malformed or inconsistent configuration."""


class Stepper(str, enum.Enum):
    EULER = "euler"
    BDF2 = "bdf2"


class BDF2Field(str, enum.Enum):
    # LAGGED: each backtracked value uses the field of its own time level
    LAGGED = "lagged"
    # FROZEN: E^(k) multiplies the extrapolated combination 2c^(k) - c^(k-1)
    FROZEN = "frozen"


class CaseName(str, enum.Enum):
    TWO_STREAM = "two_stream"
    INTERPOLATION_STUDY = "interpolation_study"
    MANUFACTURED_CONVERGENCE = "manufactured_convergence"
    CUSTOM = "custom"


@dataclass(frozen=True)
class TwoStreamDatum:
    """Perturbed symmetric double Maxwellian, normalised to unit density."""

    a: float = 1.0 / math.sqrt(8.0)
    beta: float = 1.0
    epsilon: float = 1e-3
    kappa: float = 0.5

    def velocity_profile(self, v):
        v = np.asarray(v, dtype=float)
        s = self.a * math.sqrt(2.0)
        return np.exp(-(((v - self.beta) / s) ** 2)) + np.exp(-(((v + self.beta) / s) ** 2))

    def __call__(self, x, v):
        x = np.asarray(x, dtype=float)
        norm = 1.0 / (2.0 * self.a * math.sqrt(2.0 * math.pi))
        return norm * self.velocity_profile(v) * (1.0 + self.epsilon * np.cos(self.kappa * x))


@dataclass
class SimConfig:
    case: CaseName = CaseName.TWO_STREAM
    basis: BasisKind = BasisKind.FOURIER
    N: int = 16
    M: int = 16
    alpha: float = 1.0
    x_extent: tuple[float, float] = (0.0, 4.0 * math.pi)
    # None for Hermite (whole line)
    v_extent: Optional[tuple[float, float]] = (-5.0, 5.0)
    dt: float = 0.01
    t_end: float = 30.0
    stepper: Stepper = Stepper.BDF2
    bdf2_field: BDF2Field = BDF2Field.LAGGED
    cfl_sigma: Optional[float] = None
    datum: TwoStreamDatum = field(default_factory=TwoStreamDatum)
    forcing: Optional[Forcing] = None
    initial_datum: Optional[Datum] = None
    moments: tuple[int, ...] = (0, 1, 2)
    diag_every: int = 1
    snapshot_times: tuple[float, ...] = ()
    out_dir: str = "out"
    alphas: tuple[float, ...] = (0.4, 0.9, 1.1, 1.8)
    dt_ladder: tuple[float, ...] = (4e-3, 2e-3, 1e-3, 5e-4)

    def __post_init__(self):
        self.validate()

    @property
    def sigma(self) -> float:
        if self.cfl_sigma is not None:
            return self.cfl_sigma
        return 1.0 if self.basis is BasisKind.FOURIER else 2.0

    @property
    def n_steps(self) -> int:
        k = self.t_end / self.dt
        return int(round(k))

    def datum_function(self) -> Datum:
        return self.initial_datum if self.initial_datum is not None else self.datum

    def validate(self) -> None:
        self.case = CaseName(self.case)
        self.basis = BasisKind.parse(self.basis)
        self.stepper = Stepper(self.stepper)
        self.bdf2_field = BDF2Field(self.bdf2_field)
        if not (isinstance(self.dt, (int, float)) and self.dt > 0 and math.isfinite(self.dt)):
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if not self.t_end >= 0:
            raise ConfigError(f"t_end must be non-negative, got {self.t_end}")
        if self.cfl_sigma is not None and not self.cfl_sigma > 0:
            raise ConfigError(f"cfl_sigma must be positive, got {self.cfl_sigma}")
        if not self.alpha > 0:
            raise ConfigError(f"alpha must be positive, got {self.alpha}")
        if self.basis is not BasisKind.HERMITE and self.alpha != 1.0:
            raise ConfigError(f"alpha is a Hermite parameter; {self.basis.value} requires alpha=1")
        if self.basis is BasisKind.HERMITE and self.v_extent is not None:
            # Hermite always uses the whole line; a finite extent is a user error
            # only when given explicitly, which parse_config checks
            self.v_extent = None
        if self.basis is not BasisKind.HERMITE:
            if self.v_extent is None:
                raise ConfigError(f"{self.basis.value} basis needs a finite v_extent")
            if not self.v_extent[1] > self.v_extent[0]:
                raise ConfigError(f"v_extent must have positive length, got {self.v_extent}")
        if not self.x_extent[1] > self.x_extent[0]:
            raise ConfigError(f"x_extent must have positive length, got {self.x_extent}")
        if int(self.N) != self.N or self.N < 4 or self.N % 2:
            raise ConfigError(f"N must be an even integer >= 4, got {self.N}")
        if int(self.M) != self.M or self.M < 4:
            raise ConfigError(f"M must be an integer >= 4, got {self.M}")
        self.N, self.M = int(self.N), int(self.M)
        if int(self.diag_every) != self.diag_every or self.diag_every < 1:
            raise ConfigError(f"diag_every must be a positive integer, got {self.diag_every}")
        if any(t < 0 for t in self.snapshot_times):
            raise ConfigError("snapshot times must be non-negative")
        if any(r < 0 or int(r) != r for r in self.moments):
            raise ConfigError("moment orders must be non-negative integers")
        if any(a <= 0 for a in self.alphas):
            raise ConfigError("alphas must be positive")
        if any(d <= 0 for d in self.dt_ladder):
            raise ConfigError("dt_ladder entries must be positive")
        k = self.t_end / self.dt
        if abs(k - round(k)) > 1e-9 * max(1.0, k):
            raise ConfigError(f"t_end={self.t_end} is not a whole number of steps of dt={self.dt}")


# ---------------------------------------------------------------------------
# Case defaults

CASE_DEFAULTS: dict[CaseName, dict] = {
    CaseName.TWO_STREAM: dict(
        x_extent=(0.0, 4.0 * math.pi), v_extent=(-5.0, 5.0), t_end=30.0,
        datum=TwoStreamDatum(), snapshot_times=(25.0, 30.0), stepper=Stepper.BDF2,
    ),
    CaseName.INTERPOLATION_STUDY: dict(t_end=0.0, v_extent=(-5.0, 5.0)),
    CaseName.MANUFACTURED_CONVERGENCE: dict(
        x_extent=(0.0, 2.0 * math.pi), v_extent=(-math.pi, math.pi), t_end=1.0,
    ),
    CaseName.CUSTOM: dict(snapshot_times=()),
}


# ---------------------------------------------------------------------------
# Plain-text format

def _floats(text: str) -> tuple[float, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(float(p) for p in text.replace(";", ",").split(","))


def _pair(text: str) -> tuple[float, float]:
    vals = _floats(text)
    if len(vals) != 2:
        raise ValueError(f"expected two comma-separated numbers, got {text!r}")
    return vals


def _optional_pair(text: str):
    if text.strip().lower() in ("none", "line", "real", "inf"):
        return None
    return _pair(text)


def _int(text: str) -> int:
    value = float(text)
    if value != int(value):
        raise ValueError(f"expected an integer, got {text!r}")
    return int(value)


_PARSERS: dict[str, Callable[[str], object]] = {
    "case": lambda s: CaseName(s.strip().lower()),
    "basis": lambda s: BasisKind.parse(s),
    "N": _int,
    "M": _int,
    "dt": float,
    "t_end": float,
    "alpha": float,
    "stepper": lambda s: Stepper(s.strip().lower()),
    "bdf2_field": lambda s: BDF2Field(s.strip().lower()),
    "out_dir": str.strip,
    "snapshot_times": _floats,
    "diag_every": _int,
    "x_extent": _pair,
    "v_extent": _optional_pair,
    "cfl_sigma": float,
    "moments": lambda s: tuple(_int(p) for p in s.split(",") if p.strip()),
    "alphas": _floats,
    "dt_ladder": _floats,
    "a": float,
    "beta": float,
    "epsilon": float,
    "kappa": float,
}
_DATUM_KEYS = ("a", "beta", "epsilon", "kappa")


def parse_config(text: str, case: str | CaseName | None = None) -> SimConfig:
    """Parse a ``key=value`` document into a validated :class:`SimConfig`.

    ``case`` (e.g. from the command line) overrides a ``case=`` line.
    """
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, val = (p.strip() for p in line.partition("="))
        if key not in _PARSERS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = _PARSERS[key](val)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from None

    if case is not None:
        values["case"] = CaseName(str(case.value if isinstance(case, CaseName) else case).lower())
    case_name = values.get("case", CaseName.TWO_STREAM)
    basis = values.get("basis", BasisKind.FOURIER)
    if basis is BasisKind.HERMITE and values.get("v_extent") is not None:
        raise ConfigError("the Hermite basis uses the whole real line; remove v_extent")
    if basis is not BasisKind.HERMITE and "v_extent" in values and values["v_extent"] is None:
        raise ConfigError(f"{basis.value} basis needs a finite v_extent")

    kwargs = dict(CASE_DEFAULTS[case_name])
    datum_over = {k: values.pop(k) for k in _DATUM_KEYS if k in values}
    if datum_over:
        kwargs["datum"] = dataclasses.replace(kwargs.get("datum", TwoStreamDatum()), **datum_over)
    kwargs.update(values)
    kwargs["case"] = case_name
    try:
        return SimConfig(**kwargs)
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from None


def _fmt(value) -> str:
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ",".join(_fmt(v) for v in value)
    if value is None:
        return "none"
    return str(value)


def format_config(config: SimConfig) -> str:
    """Inverse of :func:`parse_config` for the serialisable fields."""
    lines = []
    for key in ("case", "basis", "N", "M", "alpha", "x_extent", "v_extent", "dt", "t_end",
                "stepper", "bdf2_field", "cfl_sigma", "moments", "diag_every",
                "snapshot_times", "out_dir", "alphas", "dt_ladder"):
        value = getattr(config, key)
        if value is None and key == "cfl_sigma":
            continue
        if key == "v_extent" and config.basis is BasisKind.HERMITE:
            continue
        lines.append(f"{key}={_fmt(value)}")
    for key in _DATUM_KEYS:
        lines.append(f"{key}={_fmt(getattr(config.datum, key))}")
    return "\n".join(lines) + "\n"
