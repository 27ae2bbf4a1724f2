import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import simpson

from sgdecohere import fields, kinematics as K
from sgdecohere.density import (DecoherenceModel, closed_form_decoherence_factor,
                                default_axis, rho0)
from sgdecohere.dressed import QubitState
from sgdecohere.errors import RegimeWarning
from sgdecohere.numerics import CompensatedSum

from conftest import GAMMA_PHASE, MEAN_N, all_kinds


def _diag_axis(params, pts=6001):
    return np.linspace(-3.5, 3.5, pts) * params.unit


def test_rho0_properties(params, thermal_model):
    pk = thermal_model.packets
    x = _diag_axis(params)
    assert simpson(rho0(x, x, pk), x=x) == pytest.approx(1.0, abs=1e-12)
    xs = default_axis() * params.unit
    R = rho0(xs[:, None], xs[None, :], pk)
    np.testing.assert_array_equal(R, R.T)
    # hand value at a population peak: the (1,1) term plus the far (1,2) tails
    d = params.x02 - params.x01
    expect = ((1 + math.exp(-d ** 2 / (4 * params.dx0 ** 2))) ** 2
              / (2 * pk.delta * math.sqrt(2 * math.pi) * params.dx0))
    assert rho0(params.x01, params.x01, pk) == pytest.approx(expect, rel=1e-14)
    # four maxima at (+-1, +-1) in units of |x01|
    local = ((R >= np.roll(R, 1, 0)) & (R >= np.roll(R, -1, 0))
             & (R >= np.roll(R, 1, 1)) & (R >= np.roll(R, -1, 1)) & (R > 0.5 * R.max()))
    peaks = sorted(zip(*np.nonzero(local)))
    got = sorted((round(default_axis()[i], 6), round(default_axis()[j], 6)) for i, j in peaks)
    assert got == [(-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 1.0)]


@pytest.mark.parametrize("kind", list(all_kinds()))
def test_decoherence_factor_trivial_values(params, half_qubit, kind):
    m = DecoherenceModel(params, all_kinds(theta=0.3)[kind], half_qubit)
    x = default_axis() * params.unit
    for t in (0.0, 7.0, 100.0, 1000.0):
        assert np.max(np.abs(m.decoherence_factor(x, x, t) - 1)) < 1e-11
    assert np.max(np.abs(m.decoherence_factor(x[:, None], x[None, :], 0.0) - 1)) < 1e-11


def test_fock_pure_cosine(params):
    m = DecoherenceModel(params, fields.fock(83), QubitState(0.0))
    x = default_axis() * params.unit
    X, XP = x[:, None], x[None, :]
    for t in (3.0, 50.0, 777.0):
        want = np.cos(params.k * (X - XP) * m.omegas[83] * m.seconds(t))
        np.testing.assert_allclose(m.decoherence_factor(X, XP, t), want, atol=1e-13)


@pytest.mark.parametrize("kind", ["thermal", "random_phase_coherent", "fock", "coherent"])
@pytest.mark.parametrize("gamma", [0.0, math.pi / 2, GAMMA_PHASE, math.pi])
def test_closed_form_cross_check(params, kind, gamma):
    qb = QubitState(gamma, 0.4)
    m = DecoherenceModel(params, all_kinds(theta=1.1)[kind], qb)
    x = default_axis(points=61) * params.unit
    X, XP = np.meshgrid(x, x, indexing="ij")
    for t in (3.0, 100.0, 1000.0):
        gen = m.decoherence_factor(X, XP, t)
        cf = closed_form_decoherence_factor(m.field, qb, params.k, m.omegas, X, XP, m.seconds(t))
        np.testing.assert_allclose(gen, cf, atol=1e-12)


def test_fock_vacuum_closed_form(params):
    qb = QubitState(1.0)
    m = DecoherenceModel(params, fields.fock(0), qb)
    x = default_axis(points=31) * params.unit
    X, XP = np.meshgrid(x, x, indexing="ij")
    cf = closed_form_decoherence_factor(m.field, qb, params.k, m.omegas, X, XP, m.seconds(40))
    np.testing.assert_allclose(m.decoherence_factor(X, XP, 40), cf, atol=1e-14)


@settings(max_examples=25, deadline=None)
@given(kind=st.sampled_from(["thermal", "coherent", "random_phase_coherent", "fock", "sg_phase"]),
       gamma=st.floats(0.0, math.pi), phi=st.floats(0.0, 6.28), t=st.floats(0.0, 1000.0),
       mean=st.floats(0.5, 60.0))
def test_hermitian_and_incoherent_reality(params, kind, gamma, phi, t, mean):
    m = DecoherenceModel(params, all_kinds(mean, 0.8)[kind], QubitState(gamma, phi))
    x = default_axis(points=41) * params.unit
    X, XP = np.meshgrid(x, x, indexing="ij")
    D = m.decoherence_factor(X, XP, t)
    np.testing.assert_allclose(D, D.conj().T, atol=1e-14)
    if m.field.is_incoherent:
        assert np.all(D.imag == 0)
        assert m.mean_momentum(t) == 0.0


def test_factored_basics(params, thermal_model):
    x = default_axis() * params.unit
    X, XP = x[:, None], x[None, :]
    # D(t=0) equals the retained mass, 1 up to the truncation tail
    np.testing.assert_allclose(thermal_model.rho_factored(X, XP, 0.0).real,
                               rho0(X, XP, thermal_model.packets), rtol=1e-11)
    for t in (3.0, 100.0, 500.0):
        assert np.all(thermal_model.rho_factored(X, XP, t).imag == 0)


def test_coherent_real_part_matches_random_phase(params, half_qubit):
    co = DecoherenceModel(params, fields.coherent(math.sqrt(MEAN_N)), half_qubit)
    rp = DecoherenceModel(params, fields.random_phase_coherent(math.sqrt(MEAN_N)), half_qubit)
    x = default_axis(points=81) * params.unit
    X, XP = np.meshgrid(x, x, indexing="ij")
    for t in (10.0, 100.0, 1000.0):
        np.testing.assert_allclose(co.rho_factored(X, XP, t).real,
                                   rp.rho_factored(X, XP, t).real, atol=1e-12 * co.rho0(params.x01, params.x01))


def test_regime_warning(thermal_model, params):
    with pytest.warns(RegimeWarning):
        thermal_model.rho_factored(params.x01, params.x02, 1200.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        thermal_model.rho_factored(params.x01, params.x02, 1000.0)


def _literal_exact(m, x, xp, t):
    """Channel-by-channel sum written directly with phase_alpha (small models only)."""
    p = m.params
    ts = m.seconds(t)
    dxl2 = K.dxl2(p, ts)
    pref = 1 / (2 * m.packets.delta * math.sqrt(2 * math.pi) * math.sqrt(dxl2))
    total = 0
    chans = [(m.coeffs.F, None, 1)] + [(a, n, 1) for n, a in enumerate(m.coeffs.A)] \
        + [(b, n, -1) for n, b in enumerate(m.coeffs.B)]
    for w, n, sign in chans:
        if w == 0:
            continue
        ch = K.ChannelKinematics(p, n, sign)
        for j in (1, 2):
            for k in (1, 2):
                a = K.phase_alpha(x, xp, ts, n, sign, j, k, p)
                g = np.exp(-((x - ch.center(ts, j)) ** 2 + (xp - ch.center(ts, k)) ** 2) / (4 * dxl2))
                total = total + w * np.exp(1j * a) * g
    return pref * total


def test_exact_matches_literal_sum(params):
    m = DecoherenceModel(params, fields.coherent(2.0, 0.3), QubitState(1.0, 0.2))
    x = default_axis(points=31) * params.unit
    X, XP = np.meshgrid(x, x, indexing="ij")
    for t in (0.0, 40.0, 900.0):
        lit = _literal_exact(m, X, XP, t)
        np.testing.assert_allclose(m.rho_exact(X, XP, t), lit, atol=1e-9 * np.abs(lit).max())
        np.testing.assert_allclose(m.rho_exact_grid(x, x, t), lit, atol=1e-9 * np.abs(lit).max())


def test_exact_at_zero_is_rho0(thermal_model, params):
    x = default_axis(points=61) * params.unit
    R = thermal_model.rho_exact_grid(x, x, 0.0)
    np.testing.assert_allclose(R, rho0(x[:, None], x[None, :], thermal_model.packets),
                               rtol=1e-12, atol=1e-12 * R.real.max())


@pytest.mark.parametrize("t", [0.0, 100.0, 1000.0])
def test_exact_trace(coherent_trap_model, params, t):
    x = _diag_axis(params)
    d = coherent_trap_model.rho_exact(x, x, t)
    assert np.max(np.abs(d.imag)) < 1e-9 * np.max(d.real)
    assert simpson(d.real, x=x) == pytest.approx(1.0, abs=1e-9)


def test_mean_momentum(params, half_qubit, thermal_model, fock_model, phase_trap_model):
    for t in (0.0, 50.0, 1000.0):
        assert thermal_model.mean_momentum(t) == 0.0
        assert fock_model.mean_momentum(t) == 0.0
    quad = DecoherenceModel(params, fields.coherent(math.sqrt(MEAN_N), math.pi / 2), half_qubit)
    hk = params.hbar * params.k
    assert abs(quad.mean_momentum(100.0)) < 1e-14 * hk * quad.Omega * quad.seconds(100.0)
    m = phase_trap_model
    t = 100.0
    direct = -hk * m.seconds(t) * math.fsum(a * w for a, w in zip(m.coeffs.A, m.omegas))
    assert m.mean_momentum(t) == pytest.approx(direct, rel=1e-12)
    assert m.mean_momentum(t) < 0
    assert m.mean_momentum(2 * t) == pytest.approx(2 * m.mean_momentum(t), rel=1e-14)


def test_slices(thermal_model, coherent_trap_model, params):
    s = thermal_model.slice("antidiagonal", 0.0)
    i0 = np.argmin(np.abs(s.xs))
    assert s.xs[i0] == 0.0
    assert s.values[i0].real == pytest.approx(rho0(0.0, 0.0, thermal_model.packets), rel=1e-11)
    assert s.values[i0].imag == 0
    loc = coherent_trap_model.slice("local_1", 50.0)
    i1 = np.argmin(np.abs(loc.xs + 1.0))
    assert loc.xs[i1] == pytest.approx(-1.0, abs=1e-12)
    assert abs(loc.values[i1].imag) < 1e-12 * abs(loc.values[i1])
    ex = coherent_trap_model.slice("antidiagonal", 100.0, mode="exact")
    fa = coherent_trap_model.slice("antidiagonal", 100.0)
    assert np.max(np.abs(ex.values - fa.values)) < 0.02 * rho0(params.x01, params.x01, thermal_model.packets)
    with pytest.raises(ValueError):
        thermal_model.slice("diagonal", 1.0)


def test_compensated_sum_vs_fsum(rng):
    terms = rng.normal(size=(5000, 3)) * 10.0 ** rng.integers(-8, 8, size=(5000, 1))
    acc = CompensatedSum((3,))
    for row in terms:
        acc.add(row)
    want = [math.fsum(terms[:, i]) for i in range(3)]
    np.testing.assert_allclose(acc.value, want, rtol=1e-15)
