import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vlasov_sl import io
from vlasov_sl.cli import EXIT_CONFIG, EXIT_INSTABILITY, EXIT_OK, run_cli
from vlasov_sl.config import (BasisKind, ConfigError, SimConfig, Stepper, format_config,
                              parse_config)
from vlasov_sl.diagnostics import DiagnosticsRecord
from vlasov_sl.grid import make_grid
from vlasov_sl.stepper import DistributionState, Representation, initialize_state


# -- config ------------------------------------------------------------------

def test_parse_hermite_two_stream():
    cfg = parse_config("case=two_stream\nbasis=hermite\nN=16\nM=16\ndt=0.01\nalpha=1.0")
    assert cfg.basis is BasisKind.HERMITE and cfg.v_extent is None
    assert cfg.t_end == 30.0 and cfg.x_extent[1] == pytest.approx(4 * math.pi)
    assert cfg.snapshot_times == (25.0, 30.0)


@pytest.mark.parametrize("text,fragment", [
    ("basis=legendre\nalpha=2.0", "alpha"),
    ("dt=-1", "dt"),
    ("N=16\nfoo=1", "line 2"),
    ("N=16\nN=8", "duplicate"),
    ("N sixteen", "line 1"),
    ("M=abc", "line 1"),
    ("basis=hermite\nv_extent=-5,5", "whole real line"),
    ("basis=legendre\nv_extent=none", "finite"),
    ("N=15", "even"),
    ("dt=0.007\nt_end=1", "whole number"),
])
def test_parse_rejects(text, fragment):
    with pytest.raises(ConfigError, match=fragment):
        parse_config(text)


def test_parse_comments_and_case_override():
    cfg = parse_config("# header\ncase=two_stream  # trailing\n\nstepper=euler\n",
                       case="manufactured_convergence")
    assert cfg.case.value == "manufactured_convergence"
    assert cfg.stepper is Stepper.EULER and cfg.t_end == 1.0


def test_parse_datum_overrides():
    cfg = parse_config("epsilon=0.01\nkappa=0.25")
    assert cfg.datum.epsilon == 0.01 and cfg.datum.kappa == 0.25
    assert cfg.datum.beta == 1.0


@settings(max_examples=40, deadline=None)
@given(basis=st.sampled_from(["fourier", "legendre", "hermite"]),
       N=st.integers(2, 32).map(lambda n: 2 * n), M=st.integers(4, 64),
       steps=st.integers(0, 500), dt=st.sampled_from([0.01, 0.005, 1 / 800]),
       stepper=st.sampled_from(["euler", "bdf2"]), field=st.sampled_from(["lagged", "frozen"]),
       alpha=st.floats(0.3, 2.0), diag=st.integers(1, 9),
       snaps=st.lists(st.floats(0, 40, allow_nan=False), max_size=3))
def test_config_round_trip(basis, N, M, steps, dt, stepper, field, alpha, diag, snaps):
    cfg = SimConfig(basis=basis, N=N, M=M, dt=dt, t_end=steps * dt, stepper=stepper,
                    bdf2_field=field, alpha=alpha if basis == "hermite" else 1.0,
                    diag_every=diag, snapshot_times=tuple(snaps),
                    v_extent=None if basis == "hermite" else (-5.0, 5.0))
    assert parse_config(format_config(cfg)) == cfg


# -- files -------------------------------------------------------------------

def _rec(t):
    return DiagnosticsRecord(t=t, Q=1 / 3, moments={1: -1e-17, 2: math.pi}, energy=2.5,
                             first_mode=1e-300, energy_drift=0.0)


def test_timeseries_empty_and_round_trip(tmp_path):
    p = tmp_path / "ts.csv"
    io.write_timeseries([], p)
    assert p.read_text() == "t,Q,Q1,Q2,energy,first_mode,energy_drift\n"
    io.write_timeseries([_rec(0.1)], p)
    assert len(p.read_text().splitlines()) == 2
    data = io.read_timeseries(p)
    assert data["Q"][0] == 1 / 3 and data["Q2"][0] == math.pi
    assert data["first_mode"][0] == 1e-300 and data["t"][0] == 0.1


def test_snapshot_zero_state(tmp_path):
    g = make_grid(4, 4, "fourier", v_extent=(-1, 1))
    p = tmp_path / "s.txt"
    io.write_snapshot(DistributionState(np.zeros((4, 4))), g, 1.5, p)
    meta, rows = io.read_snapshot(p)
    assert meta == {"t": "1.5", "basis": "fourier", "N": "4", "M": "4", "alpha": "1"}
    assert rows.shape == (16, 3) and np.all(rows[:, 2] == 0)


@pytest.mark.parametrize("kind", ["fourier", "legendre", "hermite"])
def test_snapshot_of_initial_state_samples_datum(tmp_path, kind):
    ve = None if kind == "hermite" else (-5, 5)
    cfg = SimConfig(basis=kind, v_extent=ve)
    g = make_grid(16, 16, kind, x_extent=cfg.x_extent, v_extent=ve)
    s = initialize_state(cfg, g)
    io.write_snapshot(s, g, 0.0, tmp_path / "s.txt")
    _, rows = io.read_snapshot(tmp_path / "s.txt")
    np.testing.assert_allclose(rows[:, 2], cfg.datum(rows[:, 0], rows[:, 1]), atol=1e-12)
    if kind == "hermite":
        assert s.representation is Representation.HERMITE_P
        outer = rows[np.abs(rows[:, 1]) == np.abs(rows[:, 1]).max(), 2]
        assert np.all(outer < 1e-15)


def test_write_table_and_report(tmp_path):
    io.write_table([dict(a=1, b=0.5)], tmp_path / "t.csv")
    assert (tmp_path / "t.csv").read_text() == "a,b\n1,0.5\n"
    io.write_table([], tmp_path / "e.csv")
    io.write_report({"b": 1, "a": 2}, tmp_path / "r.json")
    assert json.loads((tmp_path / "r.json").read_text()) == {"a": 2, "b": 1}
    assert io.snapshot_name(25) == "snapshot_t0025.000.txt"


# -- command line ------------------------------------------------------------

def _cfg(tmp_path, text):
    p = tmp_path / "run.cfg"
    p.write_text(text)
    return str(p)


def test_cli_short_run_and_determinism(tmp_path, capsys):
    cfg = _cfg(tmp_path, "basis=hermite\nN=8\nM=8\nt_end=0.5\nsnapshot_times=0.25,0.5\n")
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert run_cli(["--case", "two_stream", "--config", cfg, "--out", str(out),
                        "--seed", "7"]) == EXIT_OK
        outs.append(out)
    assert "steps=50" in capsys.readouterr().out
    files = sorted(p.name for p in outs[0].iterdir())
    assert files == ["config.txt", "snapshot_t0000.250.txt", "snapshot_t0000.500.txt",
                     "timeseries.csv"]
    for f in files:
        assert (outs[0] / f).read_bytes() == (outs[1] / f).read_bytes()
    data = io.read_timeseries(outs[0] / "timeseries.csv")
    assert len(data["t"]) == 51 and np.all(np.isfinite(data["energy"]))
    assert parse_config((outs[0] / "config.txt").read_text()).N == 8


def test_cli_config_errors(tmp_path, capsys):
    assert run_cli(["--config", str(tmp_path / "missing.cfg")]) == EXIT_CONFIG
    assert run_cli(["--config", _cfg(tmp_path, "dt=-1\n")]) == EXIT_CONFIG
    assert "config error" in capsys.readouterr().err


def test_cli_instability_exit_code(tmp_path, monkeypatch):
    import vlasov_sl.stepper as stepper
    monkeypatch.setattr(stepper, "BLOWUP_LIMIT", 0.2)
    out = tmp_path / "o"
    code = run_cli(["--config", _cfg(tmp_path, "N=8\nM=8\nt_end=0.1\n"), "--out", str(out),
                    "--quiet"])
    assert code == EXIT_INSTABILITY
    report = json.loads((out / "instability.json").read_text())
    assert report["step"] == 1 and report["basis"] == "fourier"
    assert (out / "timeseries.csv").exists()


def test_cli_interpolation_case(tmp_path):
    out = tmp_path / "i"
    cfg = _cfg(tmp_path, "M=8\nalphas=0.5\n")
    assert run_cli(["--case", "interpolation_study", "--config", cfg, "--out", str(out),
                    "--quiet"]) == EXIT_OK
    lines = (out / "interpolation_summary.csv").read_text().splitlines()
    assert lines[0] == "basis,M,alpha,sup_error,l2_error"
    assert len(lines) == 1 + 2 * 4
    assert (out / "interp_hermite_M16_alpha0.5.csv").exists()


def test_cli_convergence_case(tmp_path):
    out = tmp_path / "c"
    cfg = _cfg(tmp_path, "N=8\nM=8\nt_end=0.1\ndt_ladder=0.01,0.005\n")
    assert run_cli(["--case", "manufactured_convergence", "--config", cfg, "--out", str(out),
                    "--quiet"]) == EXIT_OK
    slopes = json.loads((out / "slopes.json").read_text())
    assert set(slopes) == {"euler", "bdf2"}
