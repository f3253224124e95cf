"""Parameter sweeps, estimator-guided parameter advice and table emission."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import sys
import time
import warnings
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import AccuracyError, AdvisoryWarning, ConfigError, UnsupportedError, WignerPsidoError
from .grid import Interval, QuadSpec
from .operators import (EvalGrid, FConfig, KConfig, MConfig, TruncationConfig, YConfig,
                        estimate, evaluate, g_nu_estimate, g_xi_estimate,
                        with_param)
from .potential import Potential, by_name, y_cutoff_indicator
from .reference import linf_error, oracle_by_name, select_oracle
from .state import GaussPacket, WignerState, load_sampled

log = logging.getLogger(__name__)

CSV_COLUMNS = ("param", "eps_inf", "estimator", "realness_defect", "wall_time_s")
PI = math.pi


@dataclass(frozen=True)
class ExperimentSpec:
    potential: str
    scheme: TruncationConfig
    sweep_param: str
    sweep_values: tuple = ()
    x_domain: Interval = Interval(-10.0, 10.0)
    k_domain: Interval = Interval(-2 * PI, 2 * PI)
    state: str = "gauss_packet"
    oracle: str = "analytic"
    grid: tuple[int, int] = (201, 201)
    fmt: str = "csv"
    name: str = "custom"
    note: str = ""
    #: raise N_mu per row so that the k_mu lattice still spans the k-domain
    cover_k: bool = True

    def __post_init__(self):
        if self.sweep_param not in self.scheme.sweepable:
            raise ConfigError(f"sweep parameter {self.sweep_param!r} does not belong to "
                              f"the {self.scheme.scheme} scheme")
        if self.oracle == "analytic" and self.potential not in ("gauss", "gauss_barrier"):
            raise ConfigError("the analytic oracle requires the Gauss barrier")
        if self.oracle == "moyal" and self.potential not in ("dwell", "double_well"):
            raise ConfigError("the Moyal oracle requires a polynomial potential")
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"unknown output format {self.fmt!r}")

    def build(self):
        """Resolve the potential, the state and the evaluation grid."""
        pot = resolve_potential(self.potential)
        st = resolve_state(self.state)
        return pot, st, EvalGrid.closed(self.x_domain, self.k_domain, *self.grid)


@dataclass
class SweepRow:
    param: float
    eps_inf: float
    estimator: float | None
    realness_defect: float
    wall_time: float
    error: str | None = None

    def as_dict(self):
        return {"param": self.param, "eps_inf": self.eps_inf, "estimator": self.estimator,
                "realness_defect": self.realness_defect, "wall_time_s": self.wall_time}


def resolve_potential(spec: str) -> Potential:
    return by_name(spec)


def resolve_state(spec: str) -> WignerState:
    if spec in ("gauss", "gauss_packet"):
        return GaussPacket()
    if spec.startswith("file:"):
        return load_sampled(spec[5:])
    raise ConfigError(f"unknown state {spec!r}")


def _covered(cfg: TruncationConfig, k_domain: Interval) -> TruncationConfig:
    if cfg.scheme != "Y":
        return cfg
    need = math.ceil(k_domain.half_width / cfg.dk - 1e-9)
    return replace(cfg, N_mu=max(cfg.N_mu, need))


def run_sweep(spec: ExperimentSpec) -> list[SweepRow]:
    """One row per sweep value, in the given order.

    Scheme errors (e.g. Moyal over a tabulated potential) become error rows;
    oracle failures propagate because no row could be scored.
    """
    if not spec.sweep_values:
        return []
    pot, st, grid = spec.build()
    _, oracle_grid, _ = oracle_by_name(spec.oracle, st, pot, spec.scheme.hbar)
    reference = oracle_grid(grid.xs, grid.ks)
    rows = []
    for value in spec.sweep_values:
        t0 = time.perf_counter()
        try:
            cfg = with_param(spec.scheme, spec.sweep_param, value)
            if spec.cover_k:
                cfg = _covered(cfg, spec.k_domain)
            fld = evaluate(st, pot, grid, cfg)
            est = estimate(st, pot, grid, cfg)
            report = linf_error(fld, reference, est)
            rows.append(SweepRow(value, report.eps_inf, est, report.realness_defect,
                                 time.perf_counter() - t0))
        except WignerPsidoError as exc:
            log.warning("%s=%s failed: %s", spec.sweep_param, value, exc)
            rows.append(SweepRow(value, math.nan, None, math.nan,
                                 time.perf_counter() - t0, error=str(exc)))
    return rows


TABLES_LOCAL = dict(potential="gauss", x_domain=Interval(-10.0, 10.0),
                    k_domain=Interval(-2 * PI, 2 * PI), oracle="analytic")
TABLES_DWELL = dict(potential="dwell", x_domain=Interval(-15.0, 15.0),
                    k_domain=Interval(-2 * PI, 2 * PI), oracle="moyal")

#: K-period for the tabulated surrogate: long enough that k-aliasing stays below 1e-15
#: and the N_xi sweep reaches convergence near its upper end
RTD_L_K = 19.0


def _presets():
    return {
        "table1": ExperimentSpec(scheme=YConfig(40.0, 40), sweep_param="L_y",
                                 sweep_values=(20.0, 24.0, 28.0, 32.0, 36.0, 40.0),
                                 name="table1", **TABLES_LOCAL),
        "table2": ExperimentSpec(scheme=KConfig(4 * PI, 40), sweep_param="N_xi",
                                 sweep_values=(20, 24, 28, 32, 36, 40),
                                 name="table2", **TABLES_LOCAL),
        "table3": ExperimentSpec(scheme=FConfig(30, Interval(-10.0, 10.0)), sweep_param="N_nu",
                                 sweep_values=(10, 14, 18, 22, 26, 30),
                                 name="table3", **TABLES_LOCAL),
        "table4": ExperimentSpec(scheme=YConfig(40.0, 40), sweep_param="L_y",
                                 sweep_values=(30.0, 35.0, 40.0, 45.0, 50.0, 55.0),
                                 name="table4", **TABLES_DWELL),
        "table5": ExperimentSpec(scheme=KConfig(4 * PI, 40), sweep_param="N_xi",
                                 sweep_values=(20, 30, 40, 50, 60, 70),
                                 name="table5", **TABLES_DWELL),
        "table6": ExperimentSpec(scheme=FConfig(90, Interval(-15.0, 15.0)), sweep_param="N_nu",
                                 sweep_values=(30, 40, 50, 60, 70, 80, 90, 100, 110, 120),
                                 name="table6", **TABLES_DWELL),
        "table7": ExperimentSpec(potential="rtd", scheme=KConfig(RTD_L_K, 40),
                                 sweep_param="N_xi", sweep_values=(20, 30, 40, 45, 50, 60),
                                 x_domain=Interval(-10.0, 10.0),
                                 k_domain=Interval(-2 * PI, 2 * PI), oracle="brute_force",
                                 name="table7",
                                 note="property-check only: RTD-like surrogate potential, "
                                      "reference values not reproducible"),
        "fig1": ExperimentSpec(scheme=MConfig(0), sweep_param="P", sweep_values=tuple(range(6)),
                               name="fig1", **TABLES_LOCAL),
    }


PRESETS = tuple(_presets())


def preset(name: str) -> ExperimentSpec:
    try:
        return _presets()[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}") from None


# --- advisor -----------------------------------------------------------------

SCAN_LIMIT = 400


def advise_parameters(p: Potential, s: WignerState, x_domain: Interval, k_domain: Interval,
                      scheme: str, target_eps: float, grid: EvalGrid | None = None,
                      quad: QuadSpec = QuadSpec()) -> TruncationConfig:
    """Pick truncation parameters from the a-priori criteria.

    Y: smallest L_y (even) whose cut-off indicator |V(+-L_y/4)| is below the
    target, N_mu covering the k-domain. Unbounded potentials get an
    :class:`AdvisoryWarning` and an error scan against the oracle instead.
    K: L_k spans twice the k half-width, N_xi is the first with g <= target.
    F: N_nu is the first with g_nu <= target. M: exact order for polynomials,
    refused otherwise.
    """
    if not target_eps > 0:
        raise ConfigError(f"target_eps must be positive, got {target_eps}")
    scheme = scheme.upper()
    if grid is None:
        grid = EvalGrid.closed(x_domain, k_domain)
    k_half = k_domain.half_width

    if scheme == "Y":
        if p.is_zero:
            return YConfig(2.0, 0, quad)
        if p.local:
            L = 2.0
            while y_cutoff_indicator(p, L) > target_eps:
                L += 2.0
                if L > 2 * SCAN_LIMIT:
                    raise AccuracyError(f"no L_y up to {L} meets the target {target_eps:g}")
        else:
            L = _scan_y_length(p, s, x_domain, k_domain, target_eps, quad)
        return YConfig(L, math.ceil(k_half * L / (2 * PI) - 1e-9), quad)

    if scheme == "K":
        cfg = KConfig(2.0 * k_half, 0, quad)
        if p.is_zero:
            return cfg
        for n in range(1, SCAN_LIMIT + 1):
            cfg = replace(cfg, N_xi=n)
            if g_xi_estimate(s, p, grid, cfg) <= target_eps:
                return cfg
        raise AccuracyError(f"g_xi stays above {target_eps:g} up to N_xi={SCAN_LIMIT}")

    if scheme == "F":
        cfg = FConfig(0, x_domain, quad)
        if p.is_zero:
            return cfg
        for n in range(1, SCAN_LIMIT + 1):
            cfg = replace(cfg, N_nu=n)
            if g_nu_estimate(p, cfg) <= target_eps:
                return cfg
        raise AccuracyError(f"g_nu stays above {target_eps:g} up to N_nu={SCAN_LIMIT}")

    if scheme == "M":
        if p.is_zero:
            return MConfig(0)
        if p.degree is None:
            raise UnsupportedError(
                f"{p.name}: the Moyal truncation has no convergence criterion for "
                "non-polynomial potentials (higher-order terms do not decay); "
                "use the K-truncation instead")
        # derivatives above the degree vanish, so terms past 2P+1 = degree are zero
        return MConfig(max(0, (p.degree - 1) // 2))

    raise ConfigError(f"unknown scheme {scheme!r}")


def _scan_y_length(p, s, x_domain, k_domain, target_eps, quad):
    warnings.warn(f"{p.name} is unbounded: the |V(L_y/4)| criterion does not apply, "
                  "choosing L_y by an error scan", AdvisoryWarning, stacklevel=3)
    try:
        _, oracle_grid, _ = select_oracle(s, p)
        coarse = EvalGrid.closed(x_domain, k_domain, 101, 101)
        reference = oracle_grid(coarse.xs, coarse.ks)
    except WignerPsidoError as exc:
        raise AccuracyError(f"no oracle available to scan L_y: {exc}") from exc
    best = (math.inf, None)
    for L in np.arange(10.0, 82.0, 2.0):
        cfg = _covered(YConfig(float(L), 0, quad), k_domain)
        err = linf_error(evaluate(s, p, coarse, cfg), reference).eps_inf
        if err <= target_eps:
            return float(L)
        best = min(best, (err, float(L)))
    warnings.warn(f"no L_y reaches {target_eps:g}; using L_y={best[1]} "
                  f"(error {best[0]:.3e})", AdvisoryWarning, stacklevel=3)
    return best[1]


def config_lines(cfg: TruncationConfig) -> list[str]:
    lines = [f"scheme={cfg.scheme.lower()}"]
    for key, val in cfg.params().items():
        lines.append(f"{key}={val!r}" if isinstance(val, float) else f"{key}={val}")
    if hasattr(cfg, "quad"):
        lines += [f"quad_order={cfg.quad.order}", f"quad_ppu={cfg.quad.panels_per_unit!r}"]
    lines.append(f"hbar={cfg.hbar!r}")
    return lines


# --- emission ----------------------------------------------------------------

def _sci(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float) and math.isnan(v):
        return "nan"
    return f"{float(v):.5e}"


def _param(v) -> str:
    return f"{v:.6g}" if isinstance(v, float) else str(v)


def _json_num(v):
    if v is None or (isinstance(v, float) and not math.isfinite(v)):
        return None
    return float(f"{float(v):.5e}")


def format_rows(rows, fmt: str = "csv", comments=()) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        for c in comments:
            buf.write(f"# {c}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in rows:
            writer.writerow([_param(r.param), _sci(r.eps_inf), _sci(r.estimator),
                             _sci(r.realness_defect), _sci(r.wall_time)])
        for r in rows:
            if r.error:
                buf.write(f"# error at param={_param(r.param)}: {r.error}\n")
        return buf.getvalue()
    if fmt == "json":
        out = [{"param": r.param, "eps_inf": _json_num(r.eps_inf),
                "estimator": _json_num(r.estimator),
                "realness_defect": _json_num(r.realness_defect),
                "wall_time_s": _json_num(r.wall_time)} for r in rows]
        return json.dumps(out, indent=1) + "\n"
    raise ConfigError(f"unknown output format {fmt!r}")


def emit(rows, fmt: str = "csv", destination=None, comments=()) -> None:
    """Write rows as CSV or JSON to a path, an open file, or stdout (None/'-')."""
    text = format_rows(rows, fmt, comments)
    if destination is None or destination == "-":
        sys.stdout.write(text)
    elif hasattr(destination, "write"):
        destination.write(text)
    else:
        Path(destination).write_text(text)


def read_csv_rows(text: str) -> list[dict]:
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    out = []
    for rec in csv.DictReader(lines):
        out.append({k: (float(v) if v != "" else None) for k, v in rec.items()})
    return out


# --- key=value experiment files ----------------------------------------------

def parse_kv(text: str) -> dict[str, str]:
    out = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {n}: expected key=value, got {raw!r}")
        key, val = line.split("=", 1)
        out[key.strip().lower()] = val.strip()
    return out


def parse_interval(text: str) -> Interval:
    try:
        lo, hi = (float(_expr(t)) for t in text.split(","))
    except ValueError:
        raise ConfigError(f"expected 'a,b', got {text!r}") from None
    return Interval(lo, hi)


def _expr(token: str) -> float:
    """Float with an optional ``pi`` factor: ``4pi``, ``-2*pi``, ``pi``."""
    t = token.strip().lower().replace("*", "")
    if t.endswith("pi"):
        head = t[:-2]
        scale = -1.0 if head == "-" else 1.0 if head in ("", "+") else float(head)
        return scale * PI
    return float(t)


def parse_pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(t) for t in text.split(","))
    except ValueError:
        raise ConfigError(f"expected 'N,M', got {text!r}") from None
    return a, b


SCHEME_KEYS = {"y": ("L_y", "N_mu"), "k": ("L_k", "N_xi"), "m": ("P",), "f": ("N_nu",)}


def scheme_from_mapping(d: dict, x_domain: Interval, k_domain: Interval) -> TruncationConfig:
    """Build a config from string values; missing parameters get table defaults."""
    scheme = d.get("scheme", "k").lower()
    quad = QuadSpec(int(d.get("quad_order", 32)), float(d.get("quad_ppu", 1.0)))
    hbar = float(d.get("hbar", 1.0))
    try:
        if scheme == "y":
            L = _expr(d.get("l_y", "40"))
            n_mu = int(d["n_mu"]) if "n_mu" in d else math.ceil(k_domain.half_width * L / (2 * PI) - 1e-9)
            return YConfig(L, n_mu, quad, hbar)
        if scheme == "k":
            return KConfig(_expr(d.get("l_k", repr(2 * k_domain.half_width))),
                           int(d.get("n_xi", 40)), quad, hbar)
        if scheme == "m":
            return MConfig(int(d.get("p", 1)), hbar)
        if scheme == "f":
            return FConfig(int(d.get("n_nu", 30)), x_domain, quad, hbar)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unknown scheme {scheme!r}; expected y, k, m or f")


def spec_from_mapping(d: dict) -> ExperimentSpec:
    d = {k.lower(): v for k, v in d.items()}
    x_domain = parse_interval(d.get("xdomain", "-10,10"))
    k_domain = parse_interval(d.get("kdomain", "-2pi,2pi"))
    scheme = scheme_from_mapping(d, x_domain, k_domain)
    sweep_param = d.get("sweep", scheme.sweepable[-1])
    # accept case-insensitive parameter names
    lookup = {p.lower(): p for p in scheme.sweepable}
    sweep_param = lookup.get(sweep_param.lower(), sweep_param)
    raw_values = [v for v in d.get("values", "").split(",") if v.strip()]
    try:
        values = tuple(int(v) if sweep_param.startswith("N_") or sweep_param == "P"
                       else _expr(v) for v in raw_values)
    except ValueError as exc:
        raise ConfigError(f"bad sweep values: {exc}") from exc
    potential = d.get("potential", "gauss")
    default_oracle = {"gauss": "analytic", "gauss_barrier": "analytic",
                      "dwell": "moyal", "double_well": "moyal"}.get(potential, "brute_force")
    return ExperimentSpec(
        potential=potential, scheme=scheme, sweep_param=sweep_param, sweep_values=values,
        x_domain=x_domain, k_domain=k_domain, state=d.get("state", "gauss_packet"),
        oracle=d.get("oracle", default_oracle), grid=parse_pair(d.get("grid", "201,201")),
        fmt=d.get("format", "csv"), name=d.get("name", "custom"), note=d.get("note", ""))


def load_spec(path) -> ExperimentSpec:
    return spec_from_mapping(parse_kv(Path(path).read_text()))
