"""Ground-truth values for the pseudo-differential term and the L-infinity metric.

Three independent oracles:

* the Gauss-barrier/Gauss-packet integral (a single k'-quadrature),
* the terminating Moyal form for the quartic double well,
* a brute-force dense quadrature of the convolution form, valid for any
  potential and state, with a refinement self-check.

None of them reuses code from :mod:`wigner_psido.operators`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import AccuracyError, ConfigError
from .grid import Interval, QuadSpec
from .operators import PsiDoField, TruncationConfig
from .potential import DoubleWell, GaussBarrier, Potential, TabulatedPotential
from .state import GaussPacket, SampledState, WignerState

GAUSS_REF_QUAD = QuadSpec(32, 2.0)
BRUTE_Y_QUAD = QuadSpec(32, 1.0)
BRUTE_K_QUAD = QuadSpec(32, 2.0)
DEFAULT_Y_CUT = 50.0


@dataclass(frozen=True)
class ErrorReport:
    scheme: TruncationConfig | None
    eps_inf: float
    argmax_point: tuple[float, float]
    estimator: float | None = None
    realness_defect: float = 0.0


def _gauss_prefactor(hbar):
    return 4.0 / (hbar * math.pi * math.sqrt(2.0 * math.pi))


def gauss_barrier_reference(x, k, quad: QuadSpec = GAUSS_REF_QUAD, k_cut: float = 10.0,
                            hbar: float = 1.0):
    """Exact term for V = exp(-x^2/2) acting on the Gauss packet, by quadrature."""
    rule = quad.rule(Interval(-k_cut, k_cut))
    kq, w = rule.nodes, rule.weights
    x, k = np.broadcast_arrays(np.asarray(x, float), np.asarray(k, float))
    out = np.empty(x.shape)
    flat_x, flat_k, flat_out = x.ravel(), k.ravel(), out.reshape(-1)
    gk = w * np.exp(-4.0 * kq * kq)
    for i in range(flat_x.size):
        d = flat_k[i] - kq
        flat_out[i] = np.dot(np.exp(-2.0 * d * d) * np.sin(2.0 * d * flat_x[i]), gk)
    out = out * np.exp(-0.25 * x * x) * _gauss_prefactor(hbar)
    return out if out.ndim else float(out)


def gauss_barrier_reference_grid(xs, ks, quad: QuadSpec = GAUSS_REF_QUAD, k_cut: float = 10.0,
                                 hbar: float = 1.0):
    rule = quad.rule(Interval(-k_cut, k_cut))
    kq, w = rule.nodes, rule.weights
    xs = np.asarray(xs, float)
    ks = np.asarray(ks, float)
    d = ks[:, None] - kq[None, :]
    gauss = np.exp(-2.0 * d * d) * (w * np.exp(-4.0 * kq * kq))
    out = np.empty((xs.size, ks.size))
    for i, x in enumerate(xs):
        out[i] = np.sum(gauss * np.sin(2.0 * d * x), axis=1)
    return out * np.exp(-0.25 * xs * xs)[:, None] * _gauss_prefactor(hbar)


def double_well_reference(s: WignerState, x, k, a: float = 1.0, b: float = 2.0,
                          hbar: float = 1.0):
    """Terminating Moyal series for V = a (x^2 - b^2)^2."""
    x = np.asarray(x, float)
    d1 = s.k_derivative(x, k, 1)
    d3 = s.k_derivative(x, k, 3)
    return (4 * a * (x ** 3 - b * b * x) * d1 - a * x * d3) / hbar


def double_well_reference_grid(s: WignerState, xs, ks, a: float = 1.0, b: float = 2.0,
                               hbar: float = 1.0):
    xs = np.asarray(xs, float)[:, None]
    d1 = s.k_derivative_grid(xs[:, 0], ks, 1)
    d3 = s.k_derivative_grid(xs[:, 0], ks, 3)
    return (4 * a * (xs ** 3 - b * b * xs) * d1 - a * xs * d3) / hbar


def default_y_cut(p: Potential, x_max: float) -> float:
    """y-range for the brute-force oracle.

    Tabulated potentials are only known on their sample range, so the cut
    stops where ``x +- y/2`` would leave it.
    """
    if isinstance(p, TabulatedPotential):
        room = 2.0 * (p.support.half_width - abs(x_max))
        if room <= 0:
            raise ConfigError(f"x={x_max} leaves no y-room inside {p.support}")
        return min(DEFAULT_Y_CUT, room)
    return DEFAULT_Y_CUT


def brute_k_range(s: WignerState, k_domain: Interval) -> Interval:
    """k'-range: the k-domain padded by three decay widths.

    Sampled states are periodic in k, so they integrate over exactly their
    own period instead.
    """
    if isinstance(s, SampledState):
        return s.k_domain
    pad = 3.0 * s.k_decay_width
    return Interval(k_domain.lo - pad, k_domain.hi + pad)


def _brute_point(s, p, x, k, y_cut, y_quad, k_quad, k_range):
    yr = y_quad.rule(Interval(-y_cut, y_cut))
    kr = k_quad.rule(k_range)
    dw = p.dv(x, yr.nodes) * yr.weights
    fw = s.eval_grid(np.array([x]), kr.nodes)[0] * kr.weights
    return (kernels.conv_point(fw, kr.nodes, dw, yr.nodes, k) / (2j * np.pi)).real


def brute_force_reference(s: WignerState, p: Potential, x: float, k: float,
                          y_cut: float | None = None,
                          y_quad: QuadSpec = BRUTE_Y_QUAD, k_quad: QuadSpec = BRUTE_K_QUAD,
                          k_domain: Interval = Interval(-2 * math.pi, 2 * math.pi),
                          hbar: float = 1.0, check: bool = True, tol: float = 1e-10) -> float:
    """Dense double quadrature of the convolution form at one phase-space point.

    The Wigner kernel is integrated over ``[-y_cut, y_cut]`` for every k'
    node, then convolved with f. With ``check`` the computation is repeated
    with doubled panel counts and an :class:`AccuracyError` is raised if the
    two differ by more than ``tol``.
    """
    if y_cut is None:
        y_cut = default_y_cut(p, x)
    k_range = brute_k_range(s, k_domain)
    value = _brute_point(s, p, x, k, y_cut, y_quad, k_quad, k_range)
    if check:
        fine = _brute_point(s, p, x, k, y_cut, y_quad.refined(), k_quad.refined(), k_range)
        delta = abs(fine - value)
        if delta > tol:
            raise AccuracyError(f"brute-force oracle not converged at ({x}, {k}): "
                                f"refinement changed it by {delta:.3e}", delta)
    return value / hbar


def _brute_grid(s, p, xs, ks, y_cut, y_quad, k_quad, k_range):
    yr = y_quad.rule(Interval(-y_cut, y_cut))
    kr = k_quad.rule(k_range)
    # order of integration swapped: first the k'-transform of f, then the y-integral
    ft = kernels.trig_sum(s.eval_grid(xs, kr.nodes) * kr.weights, kr.nodes, yr.nodes, +1)
    integrand = ft * p.dv(xs[:, None], yr.nodes[None, :]) * yr.weights
    return (kernels.trig_sum(integrand, yr.nodes, ks, -1) / (2j * np.pi)).real


def brute_force_reference_grid(s: WignerState, p: Potential, xs, ks, y_cut: float | None = None,
                               y_quad: QuadSpec = BRUTE_Y_QUAD, k_quad: QuadSpec = BRUTE_K_QUAD,
                               k_domain: Interval = Interval(-2 * math.pi, 2 * math.pi),
                               hbar: float = 1.0,
                               check: bool = True, tol: float = 1e-10) -> np.ndarray:
    """Brute-force oracle on a tensor grid (same integrals, Fubini-swapped)."""
    xs = np.asarray(xs, float)
    ks = np.asarray(ks, float)
    if y_cut is None:
        y_cut = default_y_cut(p, float(np.max(np.abs(xs))))
    k_range = brute_k_range(s, k_domain)
    values = _brute_grid(s, p, xs, ks, y_cut, y_quad, k_quad, k_range)
    if check:
        fine = _brute_grid(s, p, xs, ks, y_cut, y_quad.refined(), k_quad.refined(), k_range)
        delta = float(np.max(np.abs(fine - values)))
        if delta > tol:
            raise AccuracyError(f"brute-force grid oracle not converged: refinement changed "
                                f"it by {delta:.3e}", delta)
    return values / hbar


def linf_error(field: PsiDoField, oracle, estimator: float | None = None) -> ErrorReport:
    """Max over the field's grid of |oracle - Re(field)|.

    ``oracle`` is either an array of reference samples on the grid or a
    callable ``oracle(xs, ks) -> array``.
    """
    xs, ks = field.grid.xs, field.grid.ks
    ref = oracle(xs, ks) if callable(oracle) else np.asarray(oracle, float)
    if ref.shape != field.grid.shape:
        raise ValueError(f"oracle shape {ref.shape} != field grid {field.grid.shape}")
    err = np.abs(ref - field.real)
    i, j = np.unravel_index(int(np.argmax(err)), err.shape)
    return ErrorReport(field.scheme, float(err[i, j]), (float(xs[i]), float(ks[j])),
                       estimator, field.realness_defect)


def select_oracle(s: WignerState, p: Potential, hbar: float = 1.0):
    """Best available reference for a (state, potential) pair.

    Returns ``(name, grid_fn, point_fn)`` with ``grid_fn(xs, ks)`` and
    ``point_fn(x, k)``.
    """
    if isinstance(p, GaussBarrier) and isinstance(s, GaussPacket) and p.height == 1.0:
        return ("analytic",
                lambda xs, ks: gauss_barrier_reference_grid(xs, ks, hbar=hbar),
                lambda x, k: gauss_barrier_reference(x, k, hbar=hbar))
    if isinstance(p, DoubleWell):
        return ("moyal",
                lambda xs, ks: double_well_reference_grid(s, xs, ks, p.a, p.b, hbar),
                lambda x, k: float(double_well_reference(s, x, k, p.a, p.b, hbar)))
    return ("brute_force",
            lambda xs, ks: brute_force_reference_grid(s, p, xs, ks, hbar=hbar),
            lambda x, k: brute_force_reference(s, p, x, k, hbar=hbar))


ORACLES = ("analytic", "moyal", "brute_force")


def oracle_by_name(name: str, s: WignerState, p: Potential, hbar: float = 1.0):
    if name not in ORACLES:
        raise ConfigError(f"unknown oracle {name!r}; expected one of {ORACLES}")
    if name == "analytic" and not (isinstance(p, GaussBarrier) and isinstance(s, GaussPacket)):
        raise ConfigError("the analytic oracle needs the Gauss barrier and the Gauss packet")
    if name == "moyal" and not isinstance(p, DoubleWell):
        raise ConfigError("the Moyal oracle needs a polynomial (double-well) potential")
    if name == "brute_force":
        return (name,
                lambda xs, ks: brute_force_reference_grid(s, p, xs, ks, hbar=hbar),
                lambda x, k: brute_force_reference(s, p, x, k, hbar=hbar))
    found = select_oracle(s, p, hbar)
    return found
