"""The four truncation schemes for the pseudo-differential term and their
a-priori error estimators.

All schemes evaluate on the tensor grid ``EvalGrid`` and accumulate in
complex arithmetic. For a real state and a real potential the exact term is
real, so the largest imaginary part left over is kept as
``PsiDoField.realness_defect``, a cheap numerical-health diagnostic.

Atomic units are the default (``hbar = 1``) but every config carries
``hbar`` explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Union

import numpy as np

from . import kernels
from .errors import ConfigError
from .grid import TWO_PI, Interval, QuadSpec, UniformGrid, duality_defect
from .potential import Potential
from .state import WignerState


@dataclass(frozen=True)
class EvalGrid:
    x: UniformGrid
    k: UniformGrid

    @classmethod
    def closed(cls, x_domain: Interval, k_domain: Interval, nx: int = 201, nk: int = 201):
        return cls(UniformGrid(x_domain, nx), UniformGrid(k_domain, nk))

    @property
    def xs(self) -> np.ndarray:
        return self.x.points

    @property
    def ks(self) -> np.ndarray:
        return self.k.points

    @property
    def shape(self):
        return (self.x.n_points, self.k.n_points)


def _check_count(name, value):
    if int(value) != value or value < 0:
        raise ConfigError(f"{name} must be a non-negative integer, got {value!r}")


def _check_length(name, value):
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise ConfigError(f"{name} must be a positive length, got {value!r}")


@dataclass(frozen=True)
class YConfig:
    """Truncated y-integral; the k'-integral becomes a Poisson sum on ``k_mu``."""

    L_y: float
    N_mu: int
    quad: QuadSpec = field(default_factory=QuadSpec)
    hbar: float = 1.0
    scheme = "Y"
    sweepable = ("L_y", "N_mu")

    def __post_init__(self):
        _check_length("L_y", self.L_y)
        _check_count("N_mu", self.N_mu)

    @property
    def dk(self) -> float:
        return TWO_PI / self.L_y

    @property
    def y_domain(self) -> Interval:
        return Interval.symmetric(self.L_y)

    def params(self):
        return {"L_y": self.L_y, "N_mu": self.N_mu}


@dataclass(frozen=True)
class KConfig:
    """Truncated k'-convolution; the Wigner kernel becomes a sum on ``y_xi``."""

    L_k: float
    N_xi: int
    quad: QuadSpec = field(default_factory=QuadSpec)
    hbar: float = 1.0
    scheme = "K"
    sweepable = ("L_k", "N_xi")

    def __post_init__(self):
        _check_length("L_k", self.L_k)
        _check_count("N_xi", self.N_xi)

    @property
    def dy(self) -> float:
        return TWO_PI / self.L_k

    @property
    def k_domain(self) -> Interval:
        return Interval.symmetric(self.L_k)

    def params(self):
        return {"L_k": self.L_k, "N_xi": self.N_xi}


@dataclass(frozen=True)
class MConfig:
    """Moyal series cut after ``P + 1`` odd-derivative terms."""

    P: int
    hbar: float = 1.0
    scheme = "M"
    sweepable = ("P",)

    def __post_init__(self):
        _check_count("P", self.P)

    def params(self):
        return {"P": self.P}


@dataclass(frozen=True)
class FConfig:
    """Force-spectrum sum cut at ``|nu| <= N_nu``, spectrum taken over ``x_domain``."""

    N_nu: int
    x_domain: Interval
    quad: QuadSpec = field(default_factory=QuadSpec)
    hbar: float = 1.0
    scheme = "F"
    sweepable = ("N_nu",)

    def __post_init__(self):
        _check_count("N_nu", self.N_nu)

    @property
    def dk(self) -> float:
        return TWO_PI / self.x_domain.length

    def params(self):
        return {"N_nu": self.N_nu, "L_x": self.x_domain.length}


TruncationConfig = Union[YConfig, KConfig, MConfig, FConfig]


def with_param(cfg: TruncationConfig, name: str, value) -> TruncationConfig:
    if name not in cfg.sweepable:
        raise ConfigError(f"parameter {name!r} does not belong to the {cfg.scheme} scheme "
                          f"(expected one of {cfg.sweepable})")
    if name.startswith("N_") or name == "P":
        value = int(value)
    else:
        value = float(value)
    return replace(cfg, **{name: value})


@dataclass(frozen=True, eq=False)
class PsiDoField:
    grid: EvalGrid
    values: np.ndarray
    scheme: TruncationConfig | None = None

    def __post_init__(self):
        if self.values.shape != self.grid.shape:
            raise ValueError(f"field shape {self.values.shape} != grid {self.grid.shape}")

    @property
    def real(self) -> np.ndarray:
        return self.values.real

    @property
    def realness_defect(self) -> float:
        return float(np.max(np.abs(self.values.imag))) if np.iscomplexobj(self.values) else 0.0


def _check_duality(length, spacing, what):
    if duality_defect(length, spacing) > 4:
        raise ConfigError(f"{what}: duality lock L * spacing = 2 pi violated")


def y_truncation(s: WignerState, p: Potential, grid: EvalGrid, cfg: YConfig) -> PsiDoField:
    dk = cfg.dk
    _check_duality(cfg.L_y, dk, "Y-truncation")
    if p.is_zero:
        return PsiDoField(grid, np.zeros(grid.shape, complex), cfg)
    k_half = grid.k.interval.half_width
    if cfg.N_mu * dk < k_half * (1 - 1e-12):
        raise ConfigError(f"N_mu={cfg.N_mu} with dk={dk:.6g} does not span the k-domain "
                          f"(need N_mu >= {math.ceil(k_half / dk - 1e-9)})")
    xs, ks = grid.xs, grid.ks
    k_mu = np.arange(-cfg.N_mu, cfg.N_mu + 1) * dk
    rule = cfg.quad.rule(cfg.y_domain)
    y, w = rule.nodes, rule.weights
    # sum_mu f(x,k_mu) e^{i k_mu y}, then the y-integral against e^{-i k y}
    density = kernels.trig_sum(s.eval_grid(xs, k_mu), k_mu, y, +1)
    integrand = density * p.dv(xs[:, None], y[None, :]) * w
    values = kernels.trig_sum(integrand, y, ks, -1) * (dk / (2j * np.pi * cfg.hbar))
    return PsiDoField(grid, values, cfg)


def _k_moments(s: WignerState, xs, cfg: KConfig, ys):
    """int_K exp(i k' y) f(x, k') dk' for each x and each y."""
    rule = cfg.quad.rule(cfg.k_domain)
    fw = s.eval_grid(xs, rule.nodes) * rule.weights
    return kernels.trig_sum(fw, rule.nodes, ys, +1)


def _check_k_cover(grid: EvalGrid, cfg: KConfig):
    _check_duality(cfg.L_k, cfg.dy, "K-truncation")
    kd = grid.k.interval
    if kd.lo < cfg.k_domain.lo * (1 + 1e-12) or kd.hi > cfg.k_domain.hi * (1 + 1e-12):
        raise ConfigError(f"evaluation k-domain {kd} not inside [-L_k/2, L_k/2] = {cfg.k_domain}")


def k_truncation(s: WignerState, p: Potential, grid: EvalGrid, cfg: KConfig) -> PsiDoField:
    _check_k_cover(grid, cfg)
    xs, ks = grid.xs, grid.ks
    if cfg.N_xi == 0:
        return PsiDoField(grid, np.zeros(grid.shape, dtype=complex), cfg)
    # xi = 0 carries D_V(x, 0) = 0 and is skipped
    xi = np.concatenate([np.arange(-cfg.N_xi, 0), np.arange(1, cfg.N_xi + 1)])
    y_xi = xi * cfg.dy
    moments = _k_moments(s, xs, cfg, y_xi)
    terms = p.dv(xs[:, None], y_xi[None, :]) * moments
    values = kernels.trig_sum(terms, y_xi, ks, -1) * (cfg.dy / (2j * np.pi * cfg.hbar))
    return PsiDoField(grid, values, cfg)


def m_truncation(s: WignerState, p: Potential, grid: EvalGrid, cfg: MConfig) -> PsiDoField:
    xs, ks = grid.xs, grid.ks
    values = np.zeros(grid.shape)
    for l in range(cfg.P + 1):
        n = 2 * l + 1
        coeff = (-1) ** l / (cfg.hbar * 4 ** l * math.factorial(n))
        dV = p.derivative(xs, n)
        if not np.any(dV):
            continue
        values += coeff * dV[:, None] * s.k_derivative_grid(xs, ks, n)
    return PsiDoField(grid, values.astype(complex), cfg)


def f_truncation(s: WignerState, p: Potential, grid: EvalGrid, cfg: FConfig) -> PsiDoField:
    dk = cfg.dk
    _check_duality(cfg.x_domain.length, dk, "F-truncation")
    xs, ks = grid.xs, grid.ks
    if not (np.all(cfg.x_domain.contains(xs))):
        raise ConfigError(f"evaluation x-domain {grid.x.interval} not inside {cfg.x_domain}")
    rule = cfg.quad.rule(cfg.x_domain)
    nu = np.arange(-cfg.N_nu, cfg.N_nu + 1)
    spectrum = p.force_spectrum(cfg.x_domain, nu * dk, rule)
    pref = -dk / (2 * np.pi * cfg.hbar)
    # nu = 0 enters through its k' -> 0 limit
    values = pref * spectrum[cfg.N_nu] * s.k_derivative_grid(xs, ks, 1).astype(complex)
    for j, n in enumerate(nu):
        if n == 0:
            continue
        kn = n * dk
        jump = s.eval_grid(xs, ks + 0.5 * kn) - s.eval_grid(xs, ks - 0.5 * kn)
        values += (pref * spectrum[j] / kn) * np.exp(1j * kn * xs)[:, None] * jump
    return PsiDoField(grid, values, cfg)


SCHEMES = {"Y": y_truncation, "K": k_truncation, "M": m_truncation, "F": f_truncation}


def evaluate(s: WignerState, p: Potential, grid: EvalGrid, cfg: TruncationConfig) -> PsiDoField:
    return SCHEMES[cfg.scheme](s, p, grid, cfg)


def g_xi_estimate(s: WignerState, p: Potential, grid: EvalGrid, cfg: KConfig) -> float:
    """Size of the last retained term of the K-sum, maximised over the grid.

    The term is complex; its modulus is used. It does not depend on k, so
    the maximum runs over x only.
    """
    _check_k_cover(grid, cfg)
    if cfg.N_xi == 0:
        return 0.0
    xs = grid.xs
    y_n = cfg.N_xi * cfg.dy
    moment = _k_moments(s, xs, cfg, np.array([y_n]))[:, 0]
    return float(np.max(cfg.dy * np.abs(p.dv(xs, y_n)) * np.abs(moment)))


def g_nu_estimate(p: Potential, cfg: FConfig) -> float:
    """|dk * F~(k_N) / k_N| at the cut-off wavenumber."""
    if cfg.N_nu < 1:
        raise ConfigError("g_nu needs N_nu >= 1")
    k_n = cfg.N_nu * cfg.dk
    spectrum = p.force_spectrum(cfg.x_domain, k_n, cfg.quad.rule(cfg.x_domain))
    return float(abs(cfg.dk * spectrum / k_n))


def estimate(s: WignerState, p: Potential, grid: EvalGrid, cfg: TruncationConfig):
    """The scheme's a-priori estimator, or None where it has none."""
    if cfg.scheme == "K":
        return g_xi_estimate(s, p, grid, cfg)
    if cfg.scheme == "F" and cfg.N_nu >= 1:
        return g_nu_estimate(p, cfg)
    return None
