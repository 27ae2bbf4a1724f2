"""Split-step oracle against the closed-form packets and reduced density."""
import math

import numpy as np
import pytest

from sgdecohere import DecoherenceModel, QubitState, fields, kinematics as K
from sgdecohere import oracle as O
from sgdecohere.density import rho0
from sgdecohere.errors import GridError

from conftest import MEAN_N


@pytest.fixture(scope="module")
def grid(params):
    return O.OracleGrid.build(params)


def _l2_error(params, grid, t, n, sign, j, dt):
    w = O.propagate_channel(params, j, n, sign, t, grid, dt)
    ref = K.evolved_packet(grid.x, t, n, sign, j, params) * np.exp(-1j * K.dynamic_phase(params, t, n))
    return math.sqrt(np.sum(np.abs(w.psi - ref) ** 2) * grid.dx), w


def test_grid_layout(params, grid):
    assert grid.x.size == O.DEFAULT_POINTS
    assert grid.x[grid.x.size // 2] == 0.0
    for x in (params.x01, params.x02):
        i = O.grid_indices(grid, x)
        assert grid.x[i] == pytest.approx(x, rel=1e-12)
    with pytest.raises(GridError):
        O.grid_indices(grid, 0.3 * grid.dx)
    with pytest.raises(GridError):
        O.grid_indices(grid, 2 * grid.x[-1])
    with pytest.raises(ValueError):
        O.OracleGrid.build(params, 4095)


def test_free_packet(params, grid, thermal_model):
    err, w = _l2_error(params, grid, thermal_model.seconds(100.0), None, 1, 1, O.DEFAULT_DT)
    assert err < 1e-6
    assert w.norm() == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("sign,j", [(1, 1), (-1, 2)])
def test_channel_83(params, grid, thermal_model, sign, j):
    err, w = _l2_error(params, grid, thermal_model.seconds(1000.0), 83, sign, j, O.DEFAULT_DT)
    assert err < 1e-6
    assert w.norm() == pytest.approx(1.0, abs=1e-10)


def test_splitting_order(params, grid, thermal_model):
    t = thermal_model.seconds(1000.0)
    e1, _ = _l2_error(params, grid, t, 83, 1, 1, 1e-4)
    e2, _ = _l2_error(params, grid, t, 83, 1, 1, 5e-5)
    assert e1 / e2 == pytest.approx(4.0, rel=0.02)


def test_support_guards(params, grid, thermal_model):
    with pytest.raises(GridError, match="Nyquist"):
        O.propagate_channel(params, 1, 2305, 1, thermal_model.seconds(1000.0), grid, 1e-4)
    small = O.OracleGrid.build(params, 512, half_width_dx0=2.0)
    with pytest.raises(GridError, match="leaves the grid"):
        O.propagate_channel(params, 1, 2000, 1, thermal_model.seconds(1000.0), small, 1e-4)


def test_assembly_at_zero_is_rho0(params, grid, thermal_model):
    d = O.assemble_reduced(params, thermal_model.coeffs, 0.0, grid, stride=16)
    X = d.xs * params.unit
    want = rho0(X[:, None], X[None, :], thermal_model.packets)
    assert np.max(np.abs(d.values - want)) < 1e-10 * want.max()


@pytest.mark.parametrize("case,t", [("thermal", 100.0), ("coherent", 100.0), ("coherent", 1000.0)])
def test_assembly_matches_exact(params, grid, half_qubit, thermal_model, case, t):
    m = thermal_model if case == "thermal" else DecoherenceModel(
        params, fields.coherent(math.sqrt(MEAN_N)), half_qubit)
    ts = m.seconds(t)
    # the potential is linear, so Strang splitting is exact up to a channel-global
    # phase that cancels in rho; a coarse step is therefore sufficient here
    d = O.assemble_reduced(params, m.coeffs, ts, grid, dt=ts / 8, stride=16, t_omega=t)
    X = d.xs * params.unit
    ex = m.rho_exact_grid(X, X, t)
    peak = rho0(params.x01, params.x01, m.packets)
    assert np.max(np.abs(d.values - ex)) < 1e-4 * peak
    pairs = O.reduced_pairs(params, m.coeffs, ts, O.grid_indices(grid, X), O.grid_indices(grid, -X),
                            grid, dt=ts / 8)
    assert np.max(np.abs(pairs - m.rho_exact(X, -X, t))) < 1e-4 * peak


def test_momentum(params, grid, coherent_trap_model, thermal_model):
    m = coherent_trap_model
    ts = m.seconds(100.0)
    got = O.oracle_mean_momentum(params, m.coeffs, ts, grid, dt=ts / 4)
    assert got == pytest.approx(m.mean_momentum(100.0), rel=1e-2)
    hk = params.hbar * params.k
    assert abs(O.oracle_mean_momentum(params, thermal_model.coeffs, ts, grid, dt=ts / 4)) < 1e-6 * abs(got) + 1e-16 * hk
