"""Potentials V(x) and the derived quantities the truncation schemes consume.

All evaluators accept numpy arrays and broadcast. The time argument of a
time-dependent potential is not modelled; every potential here is static.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from scipy.interpolate import make_interp_spline

from . import kernels
from .errors import DomainError, UnsupportedError
from .grid import Interval, QuadratureRule


def hermite_he(n: int, x):
    """Probabilists' Hermite polynomial He_n(x) by recurrence."""
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if n == 0:
        return h_prev
    h = x.copy()
    for j in range(1, n):
        h_prev, h = h, x * h - j * h_prev
    return h


class Potential:
    """Base class. Subclasses provide ``value`` and ``derivative``."""

    name = "potential"
    #: bounded and decaying to zero at large |x|
    local = True
    #: polynomial degree, or None for non-polynomial potentials
    degree: int | None = None
    #: whether ``derivative`` is available at every order
    max_derivative_order: int | None = None

    def value(self, x):
        raise NotImplementedError

    def derivative(self, x, order: int):
        raise NotImplementedError

    @property
    def is_zero(self) -> bool:
        return False

    def dv(self, x, y):
        """Symmetrised difference V(x + y/2) - V(x - y/2)."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return self.value(x + 0.5 * y) - self.value(x - 0.5 * y)

    def force(self, x):
        return -self.derivative(x, 1)

    def force_spectrum(self, x_domain: Interval, k, quad: QuadratureRule):
        """Truncated transform of the force, int_X F(x) exp(-i k x) dx."""
        if not (np.isclose(quad.interval.lo, x_domain.lo) and np.isclose(quad.interval.hi, x_domain.hi)):
            raise DomainError(f"quadrature covers {quad.interval}, expected {x_domain}")
        k = np.asarray(k, dtype=float)
        fw = (self.force(quad.nodes) * quad.weights)[None, :]
        out = kernels.trig_sum(fw, quad.nodes, k.ravel(), -1)[0]
        return out.reshape(k.shape) if k.ndim else complex(out[0])

    def _check_order(self, order):
        if order < 1:
            raise DomainError(f"derivative order must be >= 1, got {order}")
        if self.max_derivative_order is not None and order > self.max_derivative_order:
            raise UnsupportedError(
                f"{self.name}: derivatives beyond order {self.max_derivative_order} "
                f"are not available (requested {order})")

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r})"


class GaussBarrier(Potential):
    """V(x) = height * exp(-x^2 / 2)."""

    def __init__(self, height: float = 1.0):
        self.height = float(height)
        self.name = "gauss_barrier"

    def value(self, x):
        x = np.asarray(x, dtype=float)
        return self.height * np.exp(-0.5 * x * x)

    def derivative(self, x, order: int):
        self._check_order(order)
        x = np.asarray(x, dtype=float)
        return self.height * (-1) ** order * hermite_he(order, x) * np.exp(-0.5 * x * x)


class DoubleWell(Potential):
    """V(x) = a (x^2 - b^2)^2."""

    local = False
    degree = 4

    def __init__(self, a: float = 1.0, b: float = 2.0):
        if not a > 0:
            raise DomainError(f"double well needs a > 0, got {a}")
        self.a = float(a)
        self.b = float(b)
        self.name = "double_well"

    def value(self, x):
        x = np.asarray(x, dtype=float)
        return self.a * (x * x - self.b ** 2) ** 2

    def derivative(self, x, order: int):
        self._check_order(order)
        x = np.asarray(x, dtype=float)
        a, b2 = self.a, self.b ** 2
        if order == 1:
            return 4 * a * (x ** 3 - b2 * x)
        if order == 2:
            return a * (12 * x * x - 4 * b2)
        if order == 3:
            return 24 * a * x
        if order == 4:
            return np.full_like(x, 24 * a)
        return np.zeros_like(x)

    def dv(self, x, y):
        # factored form avoids cancelling two O(x^4) values
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return 2 * self.a * x * y * (2 * x * x + 0.5 * y * y - 2 * self.b ** 2)


class PolynomialPotential(Potential):
    """V(x) = sum_i coeffs[i] x^i."""

    local = False

    def __init__(self, coeffs, name: str = "polynomial"):
        coef = np.trim_zeros(np.asarray(coeffs, float), "b")
        self.poly = np.polynomial.Polynomial(coef if coef.size else [0.0])
        self.degree = self.poly.degree()
        self.name = name

    @property
    def is_zero(self) -> bool:
        return not np.any(self.poly.coef)

    def value(self, x):
        return self.poly(np.asarray(x, dtype=float))

    def derivative(self, x, order: int):
        self._check_order(order)
        x = np.asarray(x, dtype=float)
        if order > self.degree:
            return np.zeros_like(x)
        return self.poly.deriv(order)(x)


class TabulatedPotential(Potential):
    """Potential known at sample points, interpolated by a quintic spline.

    Evaluation outside the sample range raises :class:`DomainError`; there is
    no extrapolation. Derivatives beyond second order are refused.
    """

    max_derivative_order = 2
    spline_degree = 5

    def __init__(self, x, v, name: str = "tabulated"):
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        if x.ndim != 1 or x.shape != v.shape:
            raise DomainError("tabulated potential needs matching 1-D x and V arrays")
        if x.size < 4:
            raise DomainError(f"tabulated potential needs >= 4 samples, got {x.size}")
        if np.any(np.diff(x) <= 0):
            raise DomainError("tabulated x samples must be strictly increasing")
        self.x = x
        self.v = v
        self.name = name
        self.support = Interval(float(x[0]), float(x[-1]))
        k = min(self.spline_degree, x.size - 1)
        if k % 2 == 0:
            k -= 1
        self._spline = make_interp_spline(x, v, k=k)
        self._d1 = self._spline.derivative(1)
        self._d2 = self._spline.derivative(2)
        self._zero = not np.any(v)

    @property
    def is_zero(self) -> bool:
        return self._zero

    def _checked(self, x):
        x = np.asarray(x, dtype=float)
        if not np.all(self.support.contains(x)):
            bad = x[~self.support.contains(x)]
            raise DomainError(f"{self.name}: x={bad.flat[0]!r} outside sample range "
                              f"[{self.support.lo}, {self.support.hi}]")
        return np.clip(x, self.support.lo, self.support.hi)

    def value(self, x):
        if self._zero:
            return np.zeros_like(self._checked(x))
        return self._spline(self._checked(x))

    def derivative(self, x, order: int):
        self._check_order(order)
        x = self._checked(x)
        return (self._d1 if order == 1 else self._d2)(x)


def load_tabulated(path, name: str | None = None) -> TabulatedPotential:
    """Read a two-column ``x V`` text file; ``#`` starts a comment."""
    path = Path(path)
    data = np.loadtxt(path, comments="#", ndmin=2)
    if data.shape[1] != 2:
        raise DomainError(f"{path}: expected 2 columns, found {data.shape[1]}")
    return TabulatedPotential(data[:, 0], data[:, 1], name=name or path.stem)


def save_tabulated(p: TabulatedPotential, path) -> None:
    np.savetxt(path, np.column_stack([p.x, p.v]), fmt="%.17g",
               header=f"{p.name}: x V")


RTD_HEIGHT = 0.3
RTD_CENTER = 1.5
RTD_WIDTH = 0.5


def rtd_surrogate(x):
    """Closed-form double barrier: two Gaussian bumps, zero bias."""
    x = np.asarray(x, dtype=float)
    s = 2.0 * RTD_WIDTH ** 2
    return RTD_HEIGHT * (np.exp(-(x - RTD_CENTER) ** 2 / s) + np.exp(-(x + RTD_CENTER) ** 2 / s))


def make_rtd_like_tabulated(n_samples: int, x_domain: Interval) -> TabulatedPotential:
    """Sample :func:`rtd_surrogate` on ``n_samples`` equispaced points."""
    if n_samples < 64:
        raise DomainError(f"n_samples must be >= 64, got {n_samples}")
    x = np.linspace(x_domain.lo, x_domain.hi, n_samples)
    if x_domain.lo == -x_domain.hi:
        x = 0.5 * (x - x[::-1])
    return TabulatedPotential(x, rtd_surrogate(x), name="rtd_surrogate")


def zero_potential(x_domain: Interval, n_samples: int = 8) -> TabulatedPotential:
    x = np.linspace(x_domain.lo, x_domain.hi, n_samples)
    return TabulatedPotential(x, np.zeros_like(x), name="zero")


def linear_ramp(x_domain: Interval, slope: float, n_samples: int = 64) -> TabulatedPotential:
    """Tabulated V = slope * x, i.e. a constant force -slope."""
    x = np.linspace(x_domain.lo, x_domain.hi, n_samples)
    return TabulatedPotential(x, slope * x, name="linear_ramp")


def y_cutoff_indicator(p: Potential, y_length: float) -> float:
    """Largest |V| at the half-offset reached at the edge of a y-domain.

    For ``Y = [-L/2, L/2]`` the difference ``D_V(0, L/2)`` samples V at
    ``+-L/4``; for a local potential this is the size of what the y-cutoff
    discards.
    """
    r = 0.25 * y_length
    return float(max(abs(p.value(r)), abs(p.value(-r))))


def by_name(spec: str, **kwargs) -> Potential:
    """Resolve ``gauss``, ``dwell`` or ``file:PATH``."""
    spec = spec.strip()
    if spec in ("gauss", "gauss_barrier"):
        return GaussBarrier()
    if spec in ("dwell", "double_well"):
        return DoubleWell(kwargs.get("a", 1.0), kwargs.get("b", 2.0))
    if spec in ("rtd", "rtd_surrogate"):
        return make_rtd_like_tabulated(kwargs.get("n_samples", 20001),
                                       kwargs.get("x_domain", Interval(-25.0, 25.0)))
    if spec.startswith("file:"):
        return load_tabulated(spec[5:])
    raise DomainError(f"unknown potential {spec!r}")
