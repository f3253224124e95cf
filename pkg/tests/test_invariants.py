"""Property and invariant suite: run on its own as ``pytest tests/test_invariants.py``."""

import math
from dataclasses import replace

import mpmath
import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from wigner_psido.grid import Interval, QuadSpec, UniformGrid, duality_defect, gauss_legendre, make_dual_pair
from wigner_psido.harness import (PRESETS, advise_parameters, format_rows, preset, run_sweep)
from wigner_psido.operators import (EvalGrid, FConfig, KConfig, MConfig, PsiDoField, YConfig,
                                    evaluate, g_xi_estimate)
from wigner_psido.potential import (DoubleWell, GaussBarrier, PolynomialPotential,
                                    TabulatedPotential, make_rtd_like_tabulated)
from wigner_psido.reference import (brute_force_reference, double_well_reference,
                                    gauss_barrier_reference, gauss_barrier_reference_grid,
                                    linf_error)
from wigner_psido.state import GaussPacket, sample_state

X10 = Interval(-10.0, 10.0)
X15 = Interval(-15.0, 15.0)
KB = Interval(-2 * math.pi, 2 * math.pi)
PACKET = GaussPacket()
REFERENCE_LOCAL = (YConfig(40.0, 40), KConfig(4 * math.pi, 40), FConfig(30, X10))
DWELL_SCHEMES = (YConfig(45.0, 45), KConfig(4 * math.pi, 40), MConfig(1), FConfig(90, X15))


@pytest.fixture(scope="module")
def local_fields():
    grid = EvalGrid.closed(X10, KB)
    fields = [evaluate(PACKET, GaussBarrier(), grid, cfg) for cfg in REFERENCE_LOCAL]
    fields.append(evaluate(PACKET, GaussBarrier(), grid, MConfig(2)))
    return fields


@pytest.fixture(scope="module")
def dwell_fields():
    grid = EvalGrid.closed(X15, KB)
    return [evaluate(PACKET, DoubleWell(), grid, cfg) for cfg in DWELL_SCHEMES]


# --- grid --------------------------------------------------------------------

@given(length=st.floats(1e-3, 1e4), n=st.integers(1, 1000))
def test_duality_lock(length, n):
    pair = make_dual_pair(length, n)
    assert duality_defect(pair.primal.interval.length, pair.dual_spacing) <= 4


@given(order=st.integers(1, 40), panels=st.integers(1, 6), lo=st.floats(-5, 4),
       width=st.floats(0.1, 3), seed=st.integers(0, 2 ** 31))
def test_quadrature_polynomial_exactness(order, panels, lo, width, seed):
    iv = Interval(lo, lo + width)
    rule = gauss_legendre(iv, order, panels)
    coef = np.random.default_rng(seed).uniform(-1, 1, 2 * order)
    poly = np.polynomial.Polynomial(coef, domain=[lo, lo + width], window=[-1, 1])
    anti = poly.integ()
    exact = anti(iv.hi) - anti(iv.lo)
    assert abs(rule.integrate(poly) - exact) <= 1e-12 * max(1.0, width)
    assert abs(rule.weights.sum() - width) <= 1e-13 * width
    assert np.all((rule.nodes > iv.lo) & (rule.nodes < iv.hi))


@given(half=st.floats(0.1, 1e3), order=st.integers(1, 33), panels=st.integers(1, 9))
def test_quadrature_symmetry(half, order, panels):
    rule = gauss_legendre(Interval(-half, half), order, panels)
    np.testing.assert_array_equal(rule.nodes, -rule.nodes[::-1])
    np.testing.assert_array_equal(rule.weights, rule.weights[::-1])


@given(half=st.floats(0.1, 1e3), n=st.integers(1, 400))
def test_symmetric_grid_mirror(half, n):
    pts = UniformGrid(Interval(-half, half), 2 * n + 1).points
    np.testing.assert_array_equal(pts, -pts[::-1])
    assert np.all(np.diff(pts) > 0)
    assert pts[n] == 0.0


# --- potential ---------------------------------------------------------------

@given(x=st.floats(-8, 8), y=st.floats(-12, 12))
def test_dv_antisymmetric(x, y):
    tab = make_rtd_like_tabulated(256, X10) if abs(x) + abs(y) / 2 < 10 else None
    for p in (GaussBarrier(), DoubleWell(), tab):
        if p is not None:
            assert p.dv(x, -y) == -p.dv(x, y)


@pytest.mark.parametrize("order", range(1, 8))
def test_hermite_derivatives_vs_nested_differences(order):
    # high-precision central differences (mpmath) as the oracle
    mpmath.mp.dps = 40
    for x in np.linspace(-3, 3, 13):
        exact = float(mpmath.diff(lambda t: mpmath.exp(-t * t / 2), float(x), order))
        got = GaussBarrier().derivative(x, order)
        assert abs(got - exact) <= 1e-5 * abs(exact) + 1e-13


@given(k=st.floats(0, 20))
def test_force_spectrum_conjugate_symmetry(k):
    for p, xd in ((GaussBarrier(), X10), (DoubleWell(), X15), (make_rtd_like_tabulated(512, X10), X10)):
        rule = QuadSpec().rule(xd)
        plus, minus = p.force_spectrum(xd, k, rule), p.force_spectrum(xd, -k, rule)
        assert abs(minus - np.conj(plus)) <= 1e-12


def test_tabulated_fidelity():
    x = np.linspace(-10, 10, 512)
    p = TabulatedPotential(x, GaussBarrier().value(x))
    off = np.random.default_rng(1).uniform(-10, 10, 4000)
    assert np.max(np.abs(p.value(off) - GaussBarrier().value(off))) <= 1e-9


# --- state -------------------------------------------------------------------

@given(x=st.floats(-20, 20), k=st.floats(-5, 5))
def test_packet_parity(x, k):
    v = PACKET.eval(x, k)
    assert v > 0 or v == 0.0 and (abs(x) > 15 or abs(k) > 4)
    assert PACKET.eval(-x, k) == v and PACKET.eval(x, -k) == v
    for order in (1, 3, 5, 7):
        assert PACKET.k_derivative(x, 0.0, order) == 0.0


@pytest.mark.parametrize("order", range(1, 8))
def test_packet_derivative_consistency(order):
    mpmath.mp.dps = 40
    rng = np.random.default_rng(100 + order)
    xs, ks = rng.uniform(-4, 4, 10), rng.uniform(-1.5, 1.5, 10)
    got = PACKET.k_derivative_grid(xs, ks, order)
    for i, x in enumerate(xs):
        for j, k in enumerate(ks):
            exact = float(mpmath.diff(lambda t: mpmath.exp(-x * x / 4 - 4 * t * t) / mpmath.pi,
                                      float(k), order))
            assert abs(got[i, j] - exact) <= 1e-5 * abs(exact) + 1e-12 * (2 * math.sqrt(2)) ** order


@given(nx=st.integers(2, 40), nk=st.integers(2, 40), seed=st.integers(0, 2 ** 31))
def test_spectral_round_trip(nx, nk, seed):
    vals = np.random.default_rng(seed).normal(size=(nx, nk))
    s = sample_state(PACKET, X10, KB, nx, nk)
    s = type(s)(X10, KB, vals)
    np.testing.assert_allclose(s.eval_grid(s.x_grid.points, s.k_grid.points), vals, atol=1e-12)


# --- operators ---------------------------------------------------------------

def _realness_ok(fld):
    return fld.realness_defect <= 1e-10 * (1 + np.max(np.abs(fld.real)))


def test_realness_local(local_fields):
    assert all(_realness_ok(f) for f in local_fields)


def test_realness_double_well(dwell_fields):
    assert all(_realness_ok(f) for f in dwell_fields)


def test_realness_tabulated():
    p = make_rtd_like_tabulated(20001, Interval(-25.0, 25.0))
    grid = EvalGrid.closed(X10, KB, 51, 51)
    for cfg in (KConfig(15.0, 40), YConfig(30.0, 30), FConfig(40, X10), MConfig(0)):
        assert _realness_ok(evaluate(PACKET, p, grid, cfg))


@pytest.mark.parametrize("cfg", [YConfig(40.0, 0), KConfig(4 * math.pi, 40)],
                         ids=["Y", "K"])
@pytest.mark.parametrize("pot", [GaussBarrier(), DoubleWell()], ids=["gauss", "dwell"])
def test_mass_conservation(cfg, pot):
    xs = UniformGrid(X10, 41)
    if cfg.scheme == "K":
        # one full k-period of the K-field
        kg = UniformGrid(cfg.k_domain, 256, periodic=True)
        grid, step = EvalGrid(xs, kg), kg.spacing
    else:
        # the k_mu lattice, wide enough to hold the whole field
        n = 400
        grid = EvalGrid(xs, UniformGrid(Interval(-n * cfg.dk, n * cfg.dk), 2 * n + 1))
        cfg, step = replace(cfg, N_mu=n), cfg.dk
    vals = evaluate(PACKET, pot, grid, cfg).values
    assert np.max(np.abs(vals.sum(axis=1) * step)) <= 1e-12 * np.max(np.abs(vals))


def _odd_in_x_and_k(fld):
    v = fld.values
    scale = np.max(np.abs(v))
    return (np.max(np.abs(v + v[::-1, :])) <= 1e-10 * scale
            and np.max(np.abs(v + v[:, ::-1])) <= 1e-10 * scale)


def test_parity_local(local_fields):
    assert all(_odd_in_x_and_k(f) for f in local_fields)


def test_parity_double_well(dwell_fields):
    assert all(_odd_in_x_and_k(f) for f in dwell_fields)


def test_cross_scheme_agreement(local_fields):
    y, k, f = (fld.real for fld in local_fields[:3])
    assert np.max(np.abs(y - k)) <= 1e-10
    assert np.max(np.abs(y - f)) <= 1e-10
    assert np.max(np.abs(k - f)) <= 1e-10


CORRELATION_PAIRS = [("table2", n) for n in (20, 24, 28, 32, 36, 40)] + \
                    [("table5", n) for n in (20, 30, 40, 60, 70)] + \
                    [pytest.param("table5", 50, marks=pytest.mark.xfail(
                        strict=True, reason="eps is on its rounding floor (~1e-12 for |field| ~ 8) "
                                            "while g still tracks the truncation error"))] + \
                    [("table7", n) for n in (20, 30, 40, 45, 50, 60)]


@pytest.mark.parametrize("table,n_xi", CORRELATION_PAIRS)
def test_estimator_correlation(sweep, table, n_xi):
    row = sweep(table)[n_xi]
    if row.eps_inf > 1e-13:
        assert abs(math.floor(math.log10(row.eps_inf)) - math.floor(math.log10(row.estimator))) <= 1


def moyal_oracle(coeffs):
    """Exact term for a polynomial potential on the Gauss packet.

    Built from the convolution form: the y-moments of D_V act on the packet's
    Fourier transform as powers of i d/dk.
    """
    x, y, k = sp.symbols("x y k", real=True)
    V = sum(sp.Rational(c) * x ** i for i, c in enumerate(coeffs))
    dv = sp.Poly(sp.expand(V.subs(x, x + y / 2) - V.subs(x, x - y / 2)), y)
    # int exp(i k' y) exp(-4 k'^2) dk' = (sqrt(pi)/2) exp(-y^2/16), and
    # int exp(-i k y) exp(-y^2/16) dy = 4 sqrt(pi) exp(-4 k^2)
    base = 4 * sp.sqrt(sp.pi) * sp.exp(-4 * k ** 2)
    total = 0
    for (n,), c in dv.terms():
        total += c * sp.I ** n * sp.diff(base, k, n)
    theta = total * sp.sqrt(sp.pi) / 2 * sp.exp(-x ** 2 / 4) / sp.pi / (2 * sp.pi * sp.I)
    return sp.lambdify((x, k), sp.expand(theta), "numpy")


@pytest.mark.parametrize("coeffs", [
    [0, 1], [0, 0, 1], [5, -2, 0, 1], [16, 0, -8, 0, 1], [1, 2, -3, 1, -1, 1],
    [0, 0, 0, 0, 0, 0, 1], [2, -1, 3, 0, -2, 1, 1],
])
def test_moyal_exact_for_polynomials(coeffs):
    p = PolynomialPotential([float(c) for c in coeffs])
    grid = EvalGrid.closed(Interval(-6.0, 6.0), KB, 61, 61)
    oracle = np.real(moyal_oracle(coeffs)(grid.xs[:, None], grid.ks[None, :]))
    tol = 1e-13 * max(1.0, np.max(np.abs(oracle)))
    minimal = (p.degree - 1) // 2
    for P in {minimal, math.ceil((p.degree - 1) / 2), minimal + 2}:
        fld = evaluate(PACKET, p, grid, MConfig(P))
        assert np.max(np.abs(fld.real - oracle)) <= tol
    # one term fewer is no longer exact once the degree reaches 3
    if p.degree >= 3:
        short = evaluate(PACKET, p, grid, MConfig(minimal - 1))
        assert np.max(np.abs(short.real - oracle)) > 1e-6


# --- reference ---------------------------------------------------------------

PROBE_X = np.linspace(-4.0, 4.0, 5)
PROBE_K = np.linspace(-1.5, 1.5, 5)


def test_oracle_triangle_gauss():
    for x in PROBE_X:
        for k in PROBE_K:
            assert abs(brute_force_reference(PACKET, GaussBarrier(), x, k)
                       - gauss_barrier_reference(x, k)) <= 1e-10


def test_oracle_triangle_double_well():
    for x in PROBE_X:
        for k in PROBE_K:
            assert abs(brute_force_reference(PACKET, DoubleWell(), x, k, y_cut=50.0)
                       - double_well_reference(PACKET, x, k)) <= 1e-8


@given(a=hnp.arrays(float, (4, 3), elements=st.floats(-1e6, 1e6)),
       b=hnp.arrays(float, (4, 3), elements=st.floats(-1e6, 1e6)))
def test_linf_metric(a, b):
    grid = EvalGrid.closed(X10, KB, 4, 3)
    ab = linf_error(PsiDoField(grid, a.astype(complex)), b)
    ba = linf_error(PsiDoField(grid, b.astype(complex)), a)
    assert ab.eps_inf == ba.eps_inf >= 0
    assert (ab.eps_inf == 0) == bool(np.all(a == b))
    assert ab.argmax_point[0] in grid.xs and ab.argmax_point[1] in grid.ks


# --- harness -----------------------------------------------------------------

def _without_time(text):
    return "\n".join(line.rsplit(",", 1)[0] for line in text.splitlines())


def test_sweep_determinism():
    spec = replace(preset("table2"), grid=(61, 61))
    a, b = format_rows(run_sweep(spec)), format_rows(run_sweep(spec))
    assert _without_time(a) == _without_time(b)


def test_preset_completeness():
    for n in range(1, 8):
        assert f"table{n}" in PRESETS
    t7 = preset("table7")
    assert t7.potential == "rtd" and "property-check only" in t7.note


@pytest.mark.parametrize("scheme", ["Y", "K", "F"])
@pytest.mark.parametrize("target", [1e-6, 1e-10, 1e-15])
def test_advisor_soundness(scheme, target):
    grid = EvalGrid.closed(X10, KB)
    cfg = advise_parameters(GaussBarrier(), PACKET, X10, KB, scheme, target, grid=grid)
    eps = linf_error(evaluate(PACKET, GaussBarrier(), grid, cfg),
                     gauss_barrier_reference_grid(grid.xs, grid.ks)).eps_inf
    assert eps <= 100 * target


def test_g_xi_monotone_scan_is_first_crossing():
    grid = EvalGrid.closed(X10, KB, 51, 51)
    cfg = advise_parameters(GaussBarrier(), PACKET, X10, KB, "K", 1e-12, grid=grid)
    before = replace(cfg, N_xi=cfg.N_xi - 1)
    assert g_xi_estimate(PACKET, GaussBarrier(), grid, cfg) <= 1e-12
    assert g_xi_estimate(PACKET, GaussBarrier(), grid, before) > 1e-12
