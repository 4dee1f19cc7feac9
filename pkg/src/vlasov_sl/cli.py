"""Command-line entry point.

Exit status: 0 on completion, 1 on configuration errors, 2 when the run
detects an instability (partial outputs and ``instability.json`` are still
written).
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from . import cases, io
from .config import CaseName, ConfigError, SimConfig, format_config, parse_config
from .stepper import InstabilityError, RunRecord, advance

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_INSTABILITY = 2

log = logging.getLogger("vlasov_sl")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vlasov-sl",
                                description="Semi-Lagrangian spectral Vlasov-Poisson solver.")
    p.add_argument("--config", type=Path, help="key=value configuration file")
    p.add_argument("--case", choices=[c.value for c in CaseName],
                   help="benchmark case (overrides case= in the config)")
    p.add_argument("--out", type=Path, help="output directory (overrides out_dir)")
    p.add_argument("--seed", type=int, default=None,
                   help="reserved; the solver is deterministic")
    p.add_argument("--quiet", action="store_true", help="suppress the summary line")
    return p


def load_config(args: argparse.Namespace) -> SimConfig:
    text = ""
    if args.config is not None:
        try:
            text = args.config.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
    return parse_config(text, case=args.case)


def write_run(run: RunRecord, out: Path) -> None:
    io.write_timeseries(run.records, out / "timeseries.csv")
    for t, state in sorted(run.snapshots.items()):
        io.write_snapshot(state, run.grid, t, out / io.snapshot_name(t))
    if run.instability is not None:
        io.write_report(run.instability, out / "instability.json")


def _summary(run: RunRecord, wall: float) -> str:
    q = run.series("Q")
    q_drift = abs(q[-1] - q[0]) / abs(q[0]) if q[0] else float("nan")
    status = "UNSTABLE" if run.instability else "ok"
    return (f"{status}: steps={run.steps} Q_drift={q_drift:.3e} "
            f"energy_drift={run.records[-1].energy_drift:.3e} wall={wall:.2f}s")


def _run_simulation(config: SimConfig, out: Path, quiet: bool) -> int:
    t0 = time.perf_counter()
    run = advance(config, raise_on_instability=False)
    write_run(run, out)
    if not quiet:
        print(_summary(run, time.perf_counter() - t0))
    return EXIT_INSTABILITY if run.instability else EXIT_OK


def _run_interpolation(config: SimConfig, out: Path, quiet: bool) -> int:
    rows, curves = cases.interpolation_study(config)
    io.write_table(rows, out / "interpolation_summary.csv")
    for name, (v, exact, approx) in curves.items():
        io.write_table([dict(v=float(a), exact=float(b), interpolant=float(c))
                        for a, b, c in zip(v, exact, approx)], out / f"interp_{name}.csv")
    if not quiet:
        worst = max(rows, key=lambda r: r["sup_error"])
        print(f"ok: {len(rows)} interpolants, worst sup error {worst['sup_error']:.3e} "
              f"({worst['basis']}, M={worst['M']}, alpha={worst['alpha']:g})")
    return EXIT_OK


def _run_convergence(config: SimConfig, out: Path, quiet: bool) -> int:
    t0 = time.perf_counter()
    rows, slopes = cases.manufactured_convergence(config)
    io.write_table(rows, out / "convergence.csv")
    io.write_report(slopes, out / "slopes.json")
    if not quiet:
        parts = " ".join(f"{k}_slope={v:.3f}" for k, v in slopes.items())
        print(f"ok: {parts} wall={time.perf_counter() - t0:.2f}s")
    return EXIT_OK


def run_cli(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.seed is not None:
        log.debug("--seed=%d ignored (deterministic solver)", args.seed)
    try:
        config = load_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = args.out if args.out is not None else Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.txt").write_text(format_config(config))

    if config.case is CaseName.INTERPOLATION_STUDY:
        return _run_interpolation(config, out, args.quiet)
    if config.case is CaseName.MANUFACTURED_CONVERGENCE:
        return _run_convergence(config, out, args.quiet)
    try:
        return _run_simulation(config, out, args.quiet)
    except InstabilityError:  # pragma: no cover - advance returns the partial run instead
        return EXIT_INSTABILITY


def main() -> None:
    sys.exit(run_cli())
