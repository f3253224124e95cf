"""Time the compiled kernels against the numpy fallback.

Two groups: the raw kernels on representative shapes, and whole preset
sweeps with the kernel module swapped underneath. Writes CSV to stdout or
``--out``.

    python benchmarks/bench_kernels.py --repeat 5 --out bench.csv
"""

import argparse
import csv
import sys
import timeit
from contextlib import contextmanager

import numpy as np

from wigner_psido import kernels
from wigner_psido.harness import preset, run_sweep

# (rows, nodes, freqs): K-scheme outer sum, Y-scheme density, force spectrum
TRIG_SHAPES = [(201, 81, 201), (201, 201, 161), (1, 640, 61), (201, 2000, 201)]
CONV_SHAPES = [(200, 2000), (400, 4000)]
SWEEP_PRESETS = ["table1", "table2", "table3", "table5"]


@contextmanager
def backend(module):
    saved = kernels.trig_sum, kernels.conv_point
    kernels.trig_sum, kernels.conv_point = module.trig_sum, module.conv_point
    try:
        yield
    finally:
        kernels.trig_sum, kernels.conv_point = saved


def best_of(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def cases():
    rng = np.random.default_rng(0)
    for r, q, j in TRIG_SHAPES:
        coef = rng.normal(size=(r, q)) + 1j * rng.normal(size=(r, q))
        nodes, freqs = rng.uniform(-20, 20, q), rng.uniform(-7, 7, j)
        yield f"trig_sum {r}x{q}x{j}", lambda m, a=(coef, nodes, freqs): m.trig_sum(*a, -1)
    for nk, ny in CONV_SHAPES:
        fw = rng.normal(size=nk) + 0j
        kq, dw, y = rng.uniform(-8, 8, nk), rng.normal(size=ny) + 0j, rng.uniform(-50, 50, ny)
        yield f"conv_point {nk}x{ny}", lambda m, a=(fw, kq, dw, y): m.conv_point(*a, 0.3)
    for name in SWEEP_PRESETS:
        spec = preset(name)

        def sweep(m, spec=spec):
            with backend(m):
                run_sweep(spec)
        yield f"sweep {name}", sweep


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--out", help="CSV path (default stdout)")
    args = ap.parse_args(argv)

    impls = kernels.available_backends()
    if "compiled" not in impls:
        print("compiled extension not built; timing the python backend only", file=sys.stderr)
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["case", *(f"{b}_s" for b in impls), "speedup"])
    for label, fn in cases():
        times = {b: best_of(lambda: fn(m), args.repeat) for b, m in impls.items()}
        speedup = times["python"] / times["compiled"] if "compiled" in times else float("nan")
        w.writerow([label, *(f"{t:.4e}" for t in times.values()), f"{speedup:.2f}"])
        fh.flush()
    if fh is not sys.stdout:
        fh.close()


if __name__ == "__main__":
    main()
