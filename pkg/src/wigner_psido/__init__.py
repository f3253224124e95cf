"""Truncation schemes for the pseudo-differential term of the Wigner equation.

Four discretisations (Y, K, M, F), independent reference oracles, a-priori
error estimators and a sweep harness reproducing the benchmark tables.
"""

from .errors import (AccuracyError, AdvisoryWarning, ConfigError, DomainError,
                     UnsupportedError, WignerPsidoError)
from .grid import (DualGridPair, Interval, QuadratureRule, QuadSpec, UniformGrid,
                   gauss_legendre, make_dual_pair)
from .kernels import BACKEND
from .operators import (EvalGrid, FConfig, KConfig, MConfig, PsiDoField, YConfig, evaluate,
                        f_truncation, g_nu_estimate, g_xi_estimate, k_truncation, m_truncation,
                        y_truncation)
from .potential import (DoubleWell, GaussBarrier, PolynomialPotential, Potential, TabulatedPotential,
                        load_tabulated, make_rtd_like_tabulated)
from .reference import (ErrorReport, brute_force_reference, brute_force_reference_grid,
                        double_well_reference, gauss_barrier_reference, linf_error)
from .state import GaussPacket, SampledState, WignerState, load_sampled, sample_state

__version__ = "0.1.0"

__all__ = [
    "AccuracyError", "AdvisoryWarning", "ConfigError", "DomainError", "UnsupportedError",
    "WignerPsidoError", "DualGridPair", "Interval", "QuadratureRule", "QuadSpec", "UniformGrid",
    "gauss_legendre", "make_dual_pair", "BACKEND", "EvalGrid", "FConfig", "KConfig", "MConfig",
    "PsiDoField", "YConfig", "evaluate", "f_truncation", "g_nu_estimate", "g_xi_estimate",
    "k_truncation", "m_truncation", "y_truncation", "DoubleWell", "GaussBarrier",
    "PolynomialPotential", "Potential", "TabulatedPotential", "load_tabulated",
    "make_rtd_like_tabulated", "ErrorReport", "brute_force_reference",
    "brute_force_reference_grid", "double_well_reference", "gauss_barrier_reference",
    "linf_error", "GaussPacket", "SampledState", "WignerState", "load_sampled", "sample_state",
]
