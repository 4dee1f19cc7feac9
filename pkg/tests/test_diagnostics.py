import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vlasov_sl.config import SimConfig, TwoStreamDatum
from vlasov_sl.diagnostics import drift, mass, moment, record, total_energy
from vlasov_sl.field import solve_field, zero_field
from vlasov_sl.grid import make_grid
from vlasov_sl.stepper import field_of, initialize_state


def _state(kind, M, N=32):
    ve = None if kind == "hermite" else (-5, 5)
    cfg = SimConfig(basis=kind, N=N, M=M, v_extent=ve)
    g = make_grid(N, M, kind, x_extent=cfg.x_extent, v_extent=ve)
    return g, initialize_state(cfg, g)


def test_two_stream_datum_value():
    d = TwoStreamDatum()
    expected = (1 / (2 * d.a * math.sqrt(2 * math.pi))) * (1 + math.exp(-16)) * 1.001
    assert d(0.0, 1.0) == pytest.approx(expected, rel=1e-14)
    assert d(0.0, 1.0) == pytest.approx(0.5647538, abs=1e-7)


@pytest.mark.parametrize("kind", ["fourier", "legendre", "hermite"])
def test_datum_integrals_at_reference_resolution(kind):
    g, s = _state(kind, 64)
    L = 4 * math.pi
    assert mass(s.coeffs, g) == pytest.approx(L, rel=1e-12)
    assert abs(moment(s.coeffs, g, 1)) < 1e-12
    # second moment: a^2 + beta^2 = 1/8 + 1
    assert moment(s.coeffs, g, 2) / L == pytest.approx(1.125, rel=1e-12)


def test_hermite_datum_integrals_converge_with_m():
    errs = []
    for M in (16, 32, 64):
        g, s = _state("hermite", M)
        errs.append(abs(moment(s.coeffs, g, 2) / (4 * math.pi) - 1.125))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-12


def test_energy_of_uniform_maxwellian():
    g = make_grid(8, 32, "hermite")
    f = np.tile(np.exp(-g.v_phys ** 2) / math.sqrt(math.pi), (8, 1))
    p = f / g.velocity.weight_at_nodes
    # kinetic: 0.5 * 2pi * 1/2
    assert total_energy(p, zero_field(8), g) == pytest.approx(math.pi / 2, rel=1e-12)


def test_energy_includes_field():
    g = make_grid(16, 8, "fourier", v_extent=(-5, 5))
    E = solve_field(1 - np.cos(g.x_phys), g)
    # integral of sin^2 over [0, 2pi) is pi
    assert total_energy(np.zeros((16, 8)), E, g) == pytest.approx(math.pi / 2)


def test_drift():
    np.testing.assert_allclose(drift([2.0, 2.2, 1.8]), [0, 0.1, 0.1])
    assert drift([]).size == 0
    with pytest.raises(ZeroDivisionError):
        drift([0.0, 1.0])


def test_moment_rejects_negative_order():
    g, s = _state("fourier", 8, N=8)
    with pytest.raises(ValueError):
        moment(s.coeffs, g, -1)


def test_record_fields():
    g, s = _state("fourier", 16, N=16)
    E = field_of(s, g)
    r = record(0.5, s.coeffs, E, g, orders=(1, 2, 3), energy0=1.0)
    assert r.moment(0) == r.Q and set(r.moments) == {1, 2, 3}
    assert r.energy_drift == pytest.approx(abs(r.energy - 1.0))
    assert r.first_mode == pytest.approx(2e-3, rel=0.05)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), a=st.floats(-3, 3))
def test_moments_are_linear(seed, a):
    g = make_grid(8, 8, "legendre", v_extent=(-2, 3))
    rng = np.random.default_rng(seed)
    c1, c2 = rng.standard_normal((2, 8, 8))
    for r in (0, 1, 2):
        lhs = moment(c1 + a * c2, g, r)
        rhs = moment(c1, g, r) + a * moment(c2, g, r)
        assert lhs == pytest.approx(rhs, abs=1e-10 * (1 + abs(a)))
