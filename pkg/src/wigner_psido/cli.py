"""Command-line interface.

Exit codes: 0 success, 2 configuration error, 3 accuracy/convergence error,
4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
import warnings
from dataclasses import replace

from . import kernels
from .errors import AccuracyError, ConfigError, DomainError, WignerPsidoError
from .harness import (PRESETS, advise_parameters, config_lines, emit, load_spec, parse_interval,
                      parse_kv, parse_pair, preset, resolve_potential, resolve_state, run_sweep,
                      scheme_from_mapping)
from .operators import EvalGrid, evaluate
from .reference import linf_error, select_oracle

EXIT_OK, EXIT_CONFIG, EXIT_ACCURACY, EXIT_IO = 0, 2, 3, 4

SCHEME_FLAGS = ("L_y", "N_mu", "L_k", "N_xi", "P", "N_nu", "quad_order", "quad_ppu", "hbar")


def _add_common(p, scheme_required=False):
    p.add_argument("--config", help="key=value file; flags override it")
    p.add_argument("--potential", help="gauss | dwell | rtd | file:PATH")
    p.add_argument("--state", help="gauss_packet | file:PATH (sampled state)")
    p.add_argument("--scheme", choices=["y", "k", "m", "f"], required=False)
    p.add_argument("--xdomain", help="a,b (default -10,10)")
    p.add_argument("--kdomain", help="a,b (default -2pi,2pi)")
    for name in SCHEME_FLAGS:
        p.add_argument(f"--{name}", dest=name.lower())


def _merged(args) -> dict:
    d = parse_kv(open(args.config).read()) if getattr(args, "config", None) else {}
    for key in ("potential", "state", "scheme", "xdomain", "kdomain", "grid", "format", "out"):
        val = getattr(args, key, None)
        if val is not None:
            d[key] = str(val)
    for name in SCHEME_FLAGS:
        val = getattr(args, name.lower(), None)
        if val is not None:
            d[name.lower()] = str(val)
    return d


def _domains(d):
    return parse_interval(d.get("xdomain", "-10,10")), parse_interval(d.get("kdomain", "-2pi,2pi"))


def cmd_compute(args) -> int:
    d = _merged(args)
    if "scheme" not in d:
        raise ConfigError("--scheme is required")
    x_domain, k_domain = _domains(d)
    pot = resolve_potential(d.get("potential", "gauss"))
    st = resolve_state(d.get("state", "gauss_packet"))
    cfg = scheme_from_mapping(d, x_domain, k_domain)
    grid = EvalGrid.closed(x_domain, k_domain, *parse_pair(d.get("grid", "201,201")))
    field = evaluate(st, pot, grid, cfg)
    columns = ["x", "k", "value", "imag"]
    ref = None
    if args.error:
        name, oracle_grid, _ = select_oracle(st, pot, cfg.hbar)
        ref = oracle_grid(grid.xs, grid.ks)
        columns += ["reference", "abs_error"]
        report = linf_error(field, ref)
        logging.info("eps_inf=%.5e at %s (oracle %s)", report.eps_inf, report.argmax_point, name)
    out = d.get("out", "-")
    fh = sys.stdout if out == "-" else open(out, "w", newline="")
    try:
        fh.write(f"# scheme={cfg.scheme} {cfg.params()} realness_defect={field.realness_defect:.3e}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        xs, ks = grid.xs, grid.ks
        for i, x in enumerate(xs):
            for j, k in enumerate(ks):
                v = field.values[i, j]
                row = [f"{x:.10g}", f"{k:.10g}", f"{v.real:.16e}", f"{v.imag:.3e}"]
                if ref is not None:
                    row += [f"{ref[i, j]:.16e}", f"{abs(ref[i, j] - v.real):.5e}"]
                w.writerow(row)
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.list:
        print("\n".join(PRESETS))
        return EXIT_OK
    if bool(args.preset) == bool(args.spec):
        raise ConfigError("give exactly one of --preset or --spec")
    spec = preset(args.preset) if args.preset else load_spec(args.spec)
    if args.grid:
        spec = replace(spec, grid=parse_pair(args.grid))
    fmt = args.format or spec.fmt
    rows = run_sweep(spec)
    comments = [f"preset={spec.name} scheme={spec.scheme.scheme} sweep={spec.sweep_param}"]
    if spec.note:
        comments.append(spec.note)
    emit(rows, fmt, args.out, comments=comments if fmt == "csv" else ())
    return EXIT_OK


def cmd_advise(args) -> int:
    d = _merged(args)
    if "scheme" not in d:
        raise ConfigError("--scheme is required")
    x_domain, k_domain = _domains(d)
    pot = resolve_potential(d.get("potential", "gauss"))
    st = resolve_state(d.get("state", "gauss_packet"))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        cfg = advise_parameters(pot, st, x_domain, k_domain, d["scheme"], args.target)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    print("\n".join(config_lines(cfg)))
    return EXIT_OK


def cmd_oracle(args) -> int:
    d = _merged(args)
    pot = resolve_potential(d.get("potential", "gauss"))
    st = resolve_state(d.get("state", "gauss_packet"))
    name, _, point = select_oracle(st, pot)
    value = point(args.x, args.k)
    print(f"value={value!r}")
    print(f"oracle={name}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wigner-psido", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="evaluate one truncation on a grid")
    _add_common(p)
    p.add_argument("--grid", help="NX,NK (default 201,201)")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--error", action="store_true", help="add oracle and |error| columns")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("sweep", help="run a parameter sweep")
    p.add_argument("--preset", help=f"one of {', '.join(PRESETS)}")
    p.add_argument("--spec", help="key=value experiment file")
    p.add_argument("--grid", help="override evaluation grid NX,NK")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--list", action="store_true", help="list presets and exit")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("advise", help="suggest truncation parameters")
    _add_common(p)
    p.add_argument("--target", type=float, required=True)
    p.set_defaults(func=cmd_advise)

    p = sub.add_parser("oracle", help="reference value at one point")
    _add_common(p)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--k", type=float, required=True)
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger(__name__).debug("kernel backend: %s", kernels.BACKEND)
    try:
        return args.func(args)
    except AccuracyError as exc:
        print(f"accuracy error: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    except (ConfigError, DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (WignerPsidoError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
