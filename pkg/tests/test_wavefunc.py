import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptwell.model import WellSpec, make_level, sigma_from_alpha
from ptwell.secular import solve_level
from ptwell.wavefunc import (
    NotConvergedError,
    build,
    complex_tan,
    derivative,
    evaluate,
    g_value,
    matching_residual,
    omega_matching,
)


@pytest.fixture(scope="module")
def wf0():
    return build(solve_level(WellSpec(1.0), 0))


def test_g_value_closed_form():
    parts = sigma_from_alpha(WellSpec(1.0), math.pi / 3)
    assert g_value(parts, "+") == pytest.approx(-0.5, rel=1e-14)
    assert g_value(parts, "-") == pytest.approx(-1.5, rel=1e-14)
    with pytest.raises(ValueError):
        g_value(parts, "x")


@settings(max_examples=300, deadline=None)
@given(T=st.floats(0.01, 1000.0), alpha=st.floats(0.001, math.pi / 2 - 0.001))
def test_g_minus_identity(T, alpha):
    parts = sigma_from_alpha(WellSpec(T), alpha)
    assert g_value(parts, "-") == pytest.approx(-(parts.q + parts.p), rel=1e-12)


def test_g_strong_coupling_split():
    lv = solve_level(WellSpec(100.0), 0)
    sp = lv.sigma_parts
    Gp, Gm = g_value(sp, "+"), g_value(sp, "-")
    assert abs(Gp) < 1e-2
    assert abs(Gm) == pytest.approx(sp.q + sp.p)
    assert abs(Gm) == pytest.approx(100 * math.sqrt(2), rel=1e-2)


def test_normalization(wf0):
    assert evaluate(wf0, 0.0) == 1 + 0j
    assert derivative(wf0, 0.0) == pytest.approx(1j * wf0.G, abs=1e-15)
    assert wf0.G < 0
    assert wf0.G == pytest.approx(-wf0.k**2 / (wf0.level.sigma_parts.q + wf0.level.sigma_parts.p))
    assert wf0.B.real == 0.0


def test_odd_level_B():
    wf = build(solve_level(WellSpec(1.0), 1))
    sp = wf.level.sigma_parts
    assert wf.G == pytest.approx(-(sp.q + sp.p), rel=1e-12)
    assert wf.B == pytest.approx(1j * wf.G / wf.k, rel=1e-15)


def test_decay(wf0):
    x = np.array([10.0, 20.0, 40.0])
    vals = np.abs(evaluate(wf0, np.concatenate([x, -x])))
    assert np.all(np.diff(vals[:3]) < 0) and vals[2] < 1e-9
    assert np.allclose(vals[:3], vals[3:], rtol=1e-14)


def test_pt_symmetry_grid(wf0):
    x = np.linspace(0, 4 * math.pi, 100)
    assert np.max(np.abs(evaluate(wf0, -x) - np.conj(evaluate(wf0, x)))) <= 1e-15


@pytest.mark.parametrize("T", [1.0, 10.0, 100.0])
@pytest.mark.parametrize("N", [0, 1, 4, 5])
def test_pt_symmetry_400(T, N):
    wf = build(solve_level(WellSpec(T), N))
    x = np.linspace(-4 * math.pi, 4 * math.pi, 400)
    assert np.max(np.abs(evaluate(wf, -x) - np.conj(evaluate(wf, x)))) <= 1e-12


def test_continuity_at_edges(wf0):
    eps = 1e-12
    for a in (math.pi, -math.pi):
        inside = evaluate(wf0, a * (1 - eps))
        outside = evaluate(wf0, a * (1 + eps))
        assert abs(inside - outside) <= 1e-10
        assert abs(derivative(wf0, a * (1 - eps)) - derivative(wf0, a * (1 + eps))) <= 1e-10


@pytest.mark.parametrize("T,N", [(1.0, 0), (1.0, 1), (10.0, 5), (100.0, 3), (0.1, 7)])
def test_matching_residuals(T, N):
    wf = build(solve_level(WellSpec(T), N))
    tol = 1e-10 if (T, N) == (1.0, 0) else 1e-9
    for at in (math.pi, -math.pi):
        dv, dd = matching_residual(wf, at)
        assert dv <= tol and dd <= tol


def test_matching_breaks_off_root():
    spec = WellSpec(1.0)
    lv = solve_level(spec, 0)
    off = make_level(spec, 0, lv.omega + 0.01)
    wf = build(off, check=False)
    dv, dd = matching_residual(wf)
    assert dv == 0.0
    assert dd > 1e-3
    with pytest.raises(NotConvergedError):
        build(off)


def test_outer_amplitude(wf0):
    # tail amplitude A exp(-sigma x) reproduces psi beyond pi
    x = 2 * math.pi
    assert wf0.outer_amp * np.exp(-wf0.sigma * x) == pytest.approx(evaluate(wf0, x), rel=1e-13)
    assert abs(evaluate(wf0, x)) == pytest.approx(
        abs(wf0.outer_amp) * math.exp(-2 * math.pi * wf0.sigma.real), rel=1e-13
    )


def _schrodinger_residual(wf, T, x, h):
    E = wf.level.E
    V = np.where(x > math.pi, 1j * T * T, np.where(x < -math.pi, -1j * T * T, 0))
    d2 = (evaluate(wf, x - h) - 2 * evaluate(wf, x) + evaluate(wf, x + h)) / h**2
    return np.max(np.abs(d2 + (E - V) * evaluate(wf, x)))


@pytest.mark.parametrize("N", [0, 1, 2])
def test_schrodinger_second_order(N):
    T = 1.0
    wf = build(solve_level(WellSpec(T), N))
    # sample points away from +-pi so every stencil stays on one piece
    x = np.concatenate([np.linspace(-2.5, 2.5, 41), np.linspace(4.0, 8.0, 21), -np.linspace(4.0, 8.0, 21)])
    r1 = _schrodinger_residual(wf, T, x, 1e-2)
    r2 = _schrodinger_residual(wf, T, x, 5e-3)
    assert r1 < 1e-3
    assert 3.5 < r1 / r2 < 4.5


def test_origin_derivative_second_order(wf0):
    def err(h):
        return abs((evaluate(wf0, h) - evaluate(wf0, -h)) / (2 * h) - 1j * wf0.G)

    assert 3.5 < err(1e-2) / err(5e-3) < 4.5


@pytest.mark.parametrize("N", range(6))
def test_parity_dominance(N):
    wf = build(solve_level(WellSpec(100.0), N))
    if N % 2 == 0:
        assert abs(wf.B) < 0.1
    else:
        assert abs(wf.B) > 10


def test_complex_tan_matches_numpy():
    for z in (0.3 + 0.2j, 1.2 - 3j, -2.0 + 0.01j, 0.7 + 15j):
        assert complex_tan(z) == pytest.approx(np.tan(z), rel=1e-13)
    assert complex_tan(0.4 + 900j) == pytest.approx(1j, abs=1e-15)
    assert complex_tan(0.4 - 900j) == pytest.approx(-1j, abs=1e-15)


@pytest.mark.parametrize("T,N", [(1.0, 0), (1.0, 1), (100.0, 1), (0.1, 10)])
def test_omega_matching(T, N):
    wf = build(solve_level(WellSpec(T), N))
    md = omega_matching(wf)
    assert md.residual7 <= 1e-8
    assert md.re_tan <= 1e-8
    assert abs(complex_tan(md.Omega * math.pi) + wf.sigma / wf.k) <= 1e-10


def test_omega_shift_invariance(wf0):
    base = omega_matching(wf0)
    for shift in (-2, 1, 3):
        md = omega_matching(wf0, shift=shift)
        assert md.Omega == pytest.approx(base.Omega + shift)
        assert md.residual7 == pytest.approx(base.residual7, abs=1e-12)


def test_omega_matching_off_root():
    spec = WellSpec(1.0)
    lv = solve_level(spec, 0)
    wf = build(make_level(spec, 0, lv.omega + 0.05), check=False)
    assert omega_matching(wf).re_tan > 1e-3
