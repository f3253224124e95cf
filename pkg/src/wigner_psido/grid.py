"""Uniform phase-space grids, conjugate-grid duality and Gauss-Legendre rules."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConfigError, DomainError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise DomainError(f"interval bounds must be finite, got [{self.lo}, {self.hi}]")
        if not self.lo < self.hi:
            raise DomainError(f"interval needs lo < hi, got [{self.lo}, {self.hi}]")

    @classmethod
    def symmetric(cls, length: float) -> "Interval":
        """``[-length/2, length/2]``."""
        if not length > 0:
            raise DomainError(f"length must be positive, got {length}")
        half = 0.5 * length
        return cls(-half, half)

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def half_width(self) -> float:
        """Largest ``|x|`` on the interval."""
        return max(abs(self.lo), abs(self.hi))

    def contains(self, x, rtol: float = 1e-12):
        slack = rtol * max(1.0, self.half_width)
        x = np.asarray(x)
        return (x >= self.lo - slack) & (x <= self.hi + slack)


@dataclass(frozen=True)
class UniformGrid:
    """Equispaced points on an interval.

    Closed grids include both endpoints; periodic grids omit ``hi`` because
    it coincides with ``lo`` after wrapping.
    """

    interval: Interval
    n_points: int
    periodic: bool = False

    def __post_init__(self):
        minimum = 1 if self.periodic else 2
        if self.n_points < minimum:
            raise ConfigError(f"a {'periodic' if self.periodic else 'closed'} grid needs "
                              f">= {minimum} points, got {self.n_points}")

    @property
    def spacing(self) -> float:
        n = self.n_points if self.periodic else self.n_points - 1
        return self.interval.length / n

    def point(self, i: int) -> float:
        return self.interval.lo + i * self.spacing

    @property
    def points(self) -> np.ndarray:
        i = np.arange(self.n_points)
        pts = self.interval.lo + i * self.spacing
        if not self.periodic:
            # pin the far endpoint and restore exact mirror symmetry
            pts[-1] = self.interval.hi
            if self.interval.lo == -self.interval.hi:
                pts = 0.5 * (pts - pts[::-1])
        return pts


@dataclass(frozen=True)
class DualGridPair:
    """A primal grid and the conjugate spacing locked by ``L * spacing = 2 pi``.

    The dual side is an index set ``-n_dual_half..n_dual_half`` rather than a
    stored grid.
    """

    primal: UniformGrid
    dual_spacing: float
    n_dual_half: int

    def __post_init__(self):
        if duality_defect(self.primal.interval.length, self.dual_spacing) > 4:
            raise ConfigError(
                f"duality lock violated: L={self.primal.interval.length!r}, "
                f"dual spacing={self.dual_spacing!r}")

    @property
    def dual_indices(self) -> np.ndarray:
        return np.arange(-self.n_dual_half, self.n_dual_half + 1)

    @property
    def dual_points(self) -> np.ndarray:
        return self.dual_indices * self.dual_spacing


def duality_defect(length: float, spacing: float) -> float:
    """``|L * spacing - 2 pi|`` measured in ulps of ``2 pi``."""
    return abs(length * spacing - TWO_PI) / np.spacing(TWO_PI)


def make_dual_pair(length: float, n_dual_half: int, n_primal: int | None = None) -> DualGridPair:
    if not length > 0:
        raise DomainError(f"length must be positive, got {length}")
    if n_dual_half < 1:
        raise ConfigError(f"n_dual_half must be >= 1, got {n_dual_half}")
    if n_primal is None:
        n_primal = 2 * n_dual_half + 1
    primal = UniformGrid(Interval.symmetric(length), n_primal, periodic=True)
    return DualGridPair(primal, TWO_PI / length, n_dual_half)


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    interval: Interval
    order: int = field(default=0)
    panels: int = field(default=1)

    def integrate(self, func) -> float:
        return np.dot(self.weights, func(self.nodes))

    def __len__(self):
        return self.nodes.size


def _legendre(n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """P_n(x) and P_n'(x) by the three-term recurrence."""
    p_prev = np.ones_like(x)
    p = x.copy()
    for j in range(2, n + 1):
        p_prev, p = p, ((2 * j - 1) * x * p - (j - 1) * p_prev) / j
    if n == 1:
        p_prev = np.ones_like(x)
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


@lru_cache(maxsize=None)
def legendre_reference(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on ``[-1, 1]`` by Newton iteration."""
    if order < 1:
        raise ConfigError(f"quadrature order must be >= 1, got {order}")
    n = order
    # positive-half roots only; the rest follow by symmetry
    i = np.arange(1, (n + 1) // 2 + 1)
    x = np.cos(np.pi * (i - 0.25) / (n + 0.5)) * (1 - (n - 1) / (8.0 * n ** 3))
    for _ in range(100):
        p, dp = _legendre(n, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-16:
            break
    _, dp = _legendre(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    pos, wpos = x[::-1], w[::-1]
    if n % 2:
        pos[0] = 0.0
        nodes = np.concatenate([-pos[:0:-1], pos])
        weights = np.concatenate([wpos[:0:-1], wpos])
    else:
        nodes = np.concatenate([-pos[::-1], pos])
        weights = np.concatenate([wpos[::-1], wpos])
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_legendre(interval: Interval, order: int = 32, panels: int = 1) -> QuadratureRule:
    """Composite Gauss-Legendre rule with ``panels`` equal panels of ``order`` nodes."""
    if panels < 1:
        raise ConfigError(f"panels must be >= 1, got {panels}")
    t, w = legendre_reference(order)
    edges = np.linspace(interval.lo, interval.hi, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    if interval.lo == -interval.hi:
        mid = 0.5 * (mid - mid[::-1])
        half = 0.5 * (half + half[::-1])
    nodes = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return QuadratureRule(nodes, weights, interval, order, panels)


@dataclass(frozen=True)
class QuadSpec:
    """How to build a composite rule over an interval of arbitrary length.

    ``panels_per_unit`` sets the panel count as ``ceil(length * ppu)``.
    """

    order: int = 32
    panels_per_unit: float = 1.0

    def __post_init__(self):
        if self.order < 1 or not self.panels_per_unit > 0:
            raise ConfigError(f"invalid quadrature spec {self}")

    def panels_for(self, interval: Interval) -> int:
        return max(1, math.ceil(interval.length * self.panels_per_unit - 1e-9))

    def rule(self, interval: Interval) -> QuadratureRule:
        return gauss_legendre(interval, self.order, self.panels_for(interval))

    def refined(self, factor: float = 2.0) -> "QuadSpec":
        return QuadSpec(self.order, self.panels_per_unit * factor)
