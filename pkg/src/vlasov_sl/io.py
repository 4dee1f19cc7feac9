"""Delimited output: diagnostics time series, phase-space snapshots, reports."""
from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable

import numpy as np

from .diagnostics import DiagnosticsRecord
from .grid import PhaseGrid
from .stepper import DistributionState

TIMESERIES_HEADER = ("t", "Q", "Q1", "Q2", "energy", "first_mode", "energy_drift")


def _num(x: float) -> str:
    return format(float(x), ".17g")


def write_timeseries(records: Iterable[DiagnosticsRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TIMESERIES_HEADER)
        for r in records:
            w.writerow([_num(v) for v in (r.t, r.Q, r.moment(1), r.moment(2), r.energy,
                                          r.first_mode, r.energy_drift)])


def read_timeseries(path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    data = np.array(body, dtype=float).reshape(len(body), len(header))
    return {name: data[:, i] for i, name in enumerate(header)}


def write_snapshot(state: DistributionState, grid: PhaseGrid, t: float, path) -> None:
    """``x v f`` rows in physical coordinates, f reconstructed from the stored representation."""
    f = state.f_values(grid)
    lines = [f"# t={_num(t)}",
             f"# basis={grid.kind.value} N={grid.N} M={grid.M} alpha={_num(grid.velocity.alpha)}"]
    for n, x in enumerate(grid.x_phys):
        for m, v in enumerate(grid.v_phys):
            lines.append(f"{_num(x)} {_num(v)} {_num(f[n, m])}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_snapshot(path) -> tuple[dict[str, str], np.ndarray]:
    meta: dict[str, str] = {}
    rows = []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            for item in line[1:].split():
                k, _, v = item.partition("=")
                meta[k] = v
        elif line.strip():
            rows.append([float(p) for p in line.split()])
    return meta, np.array(rows).reshape(-1, 3)


def write_report(report: dict, path) -> None:
    Path(path).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")


def write_table(rows: list[dict], path) -> None:
    if not rows:
        Path(path).write_text("")
        return
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: _num(v) if isinstance(v, float) else v for k, v in row.items()})


def snapshot_name(t: float) -> str:
    return f"snapshot_t{t:08.3f}.txt"
