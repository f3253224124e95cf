"""Wigner-function evaluators: the analytic Gauss packet and grid-sampled states."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .errors import DomainError
from .grid import Interval, UniformGrid
from .potential import hermite_he


class WignerState:
    """Interface used by the operators.

    ``eval_grid``/``k_derivative_grid`` evaluate on the tensor product of two
    1-D coordinate arrays and are the fast path; ``eval``/``k_derivative``
    broadcast pointwise.
    """

    name = "state"
    k_decay_width = 1.0

    def eval(self, x, k):
        raise NotImplementedError

    def k_derivative(self, x, k, order: int):
        raise NotImplementedError

    def eval_grid(self, xs, ks):
        return self.eval(np.asarray(xs, float)[:, None], np.asarray(ks, float)[None, :])

    def k_derivative_grid(self, xs, ks, order: int):
        return self.k_derivative(np.asarray(xs, float)[:, None],
                                 np.asarray(ks, float)[None, :], order)


class GaussPacket(WignerState):
    """f(x, k) = exp(-x^2/4 - 4 k^2) / pi."""

    name = "gauss_packet"
    k_decay_width = 1.0 / (2.0 * math.sqrt(2.0))

    def eval(self, x, k):
        x = np.asarray(x, dtype=float)
        k = np.asarray(k, dtype=float)
        return np.exp(-0.25 * x * x - 4.0 * k * k) / np.pi

    def k_derivative(self, x, k, order: int):
        if order < 1:
            raise DomainError(f"derivative order must be >= 1, got {order}")
        k = np.asarray(k, dtype=float)
        # exp(-4k^2) = exp(-u^2/2) with u = 2 sqrt(2) k
        c = 2.0 * math.sqrt(2.0)
        u = c * k
        return (-c) ** order * hermite_he(order, u) * self.eval(x, k)

    def eval_grid(self, xs, ks):
        xs = np.asarray(xs, dtype=float)
        ks = np.asarray(ks, dtype=float)
        return np.outer(np.exp(-0.25 * xs * xs), np.exp(-4.0 * ks * ks)) / np.pi

    def k_derivative_grid(self, xs, ks, order: int):
        if order < 1:
            raise DomainError(f"derivative order must be >= 1, got {order}")
        xs = np.asarray(xs, dtype=float)
        ks = np.asarray(ks, dtype=float)
        c = 2.0 * math.sqrt(2.0)
        dk = (-c) ** order * hermite_he(order, c * ks) * np.exp(-4.0 * ks * ks)
        return np.outer(np.exp(-0.25 * xs * xs), dk) / np.pi


def _modes(grid: UniformGrid):
    """Angular frequencies and the samples->coefficients map for a periodic grid.

    Even point counts split the Nyquist mode symmetrically so that real
    samples give a real interpolant.
    """
    n = grid.n_points
    L = grid.interval.length
    m = np.fft.fftfreq(n, d=1.0 / n)
    fwd = np.fft.fft(np.eye(n), axis=0) / n
    if n % 2 == 0:
        nyq = n // 2
        m = np.append(m, nyq)
        m[nyq] = -nyq
        fwd = np.vstack([fwd, fwd[nyq]])
        fwd[nyq] *= 0.5
        fwd[-1] *= 0.5
    return 2.0 * np.pi * m / L, fwd


class SampledState(WignerState):
    """A Wigner function stored on a periodic grid over X x K.

    Off-grid values come from trigonometric interpolation in both variables,
    so the state is treated as band-limited on the box. ``k`` is extended
    periodically; ``x`` outside X raises :class:`DomainError`.
    """

    name = "sampled"

    def __init__(self, x_domain: Interval, k_domain: Interval, values, k_decay_width=None):
        values = np.asarray(values, dtype=float)
        if values.ndim != 2:
            raise DomainError("sampled state needs a 2-D value array")
        self.x_grid = UniformGrid(x_domain, values.shape[0], periodic=True)
        self.k_grid = UniformGrid(k_domain, values.shape[1], periodic=True)
        self.values = values
        self._wx, tx = _modes(self.x_grid)
        self._wk, tk = _modes(self.k_grid)
        self._coef = tx @ values @ tk.T
        if k_decay_width is None:
            ks = self.k_grid.points
            weight = np.abs(values).sum(axis=0)
            total = weight.sum()
            k_decay_width = math.sqrt((weight * ks ** 2).sum() / total) if total else 1.0
        self.k_decay_width = float(k_decay_width)

    @property
    def x_domain(self) -> Interval:
        return self.x_grid.interval

    @property
    def k_domain(self) -> Interval:
        return self.k_grid.interval

    def _x_basis(self, xs):
        xs = np.asarray(xs, dtype=float)
        if not np.all(self.x_domain.contains(xs)):
            raise DomainError(f"x outside sampled domain {self.x_domain}")
        return np.exp(1j * np.outer(xs - self.x_domain.lo, self._wx))

    def _k_basis(self, ks, order=0):
        ks = np.asarray(ks, dtype=float)
        basis = np.exp(1j * np.outer(ks - self.k_domain.lo, self._wk))
        if order:
            basis = basis * (1j * self._wk) ** order
        return basis

    def eval_grid(self, xs, ks):
        return (self._x_basis(xs) @ self._coef @ self._k_basis(ks).T).real

    def k_derivative_grid(self, xs, ks, order: int):
        if order < 1:
            raise DomainError(f"derivative order must be >= 1, got {order}")
        return (self._x_basis(xs) @ self._coef @ self._k_basis(ks, order).T).real

    def _pointwise(self, x, k, order):
        x, k = np.broadcast_arrays(np.asarray(x, float), np.asarray(k, float))
        ex = self._x_basis(x.ravel())
        ek = self._k_basis(k.ravel(), order)
        out = np.einsum("pa,ab,pb->p", ex, self._coef, ek).real
        return out.reshape(x.shape) if x.ndim else float(out[0])

    def eval(self, x, k):
        return self._pointwise(x, k, 0)

    def k_derivative(self, x, k, order: int):
        if order < 1:
            raise DomainError(f"derivative order must be >= 1, got {order}")
        return self._pointwise(x, k, order)

    def save(self, path) -> None:
        nx, nk = self.values.shape
        with open(path, "w") as fh:
            fh.write(f"{nx} {nk} {self.x_domain.lo!r} {self.x_domain.hi!r} "
                     f"{self.k_domain.lo!r} {self.k_domain.hi!r}\n")
            np.savetxt(fh, self.values, fmt="%.17g")


def load_sampled(path) -> SampledState:
    path = Path(path)
    with open(path) as fh:
        head = fh.readline().split()
        if len(head) != 6:
            raise DomainError(f"{path}: header must be 'nx nk xlo xhi klo khi'")
        nx, nk = int(head[0]), int(head[1])
        xlo, xhi, klo, khi = map(float, head[2:])
        values = np.loadtxt(fh, ndmin=2)
    if values.shape != (nx, nk):
        raise DomainError(f"{path}: expected {nx}x{nk} values, found {values.shape}")
    return SampledState(Interval(xlo, xhi), Interval(klo, khi), values)


def sample_state(state: WignerState, x_domain: Interval, k_domain: Interval,
                 nx: int, nk: int) -> SampledState:
    xg = UniformGrid(x_domain, nx, periodic=True)
    kg = UniformGrid(k_domain, nk, periodic=True)
    return SampledState(x_domain, k_domain, state.eval_grid(xg.points, kg.points),
                        k_decay_width=getattr(state, "k_decay_width", None))
