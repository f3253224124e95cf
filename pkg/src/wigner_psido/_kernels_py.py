"""Reference numpy implementation of the hot kernels.

Used when the compiled extension is unavailable, and by the benchmark as
the baseline. Semantics must match ``_kernels.pyx`` exactly.
"""

import numpy as np

# cap on the materialised phase block (complex entries)
_BLOCK_ENTRIES = 1 << 21


def trig_sum(coef, nodes, freqs, sign):
    """out[r, j] = sum_q coef[r, q] * exp(sign * 1j * freqs[j] * nodes[q])."""
    coef = np.ascontiguousarray(coef, dtype=np.complex128)
    nodes = np.ascontiguousarray(nodes, dtype=np.float64)
    freqs = np.ascontiguousarray(freqs, dtype=np.float64)
    if coef.ndim != 2 or coef.shape[1] != nodes.size:
        raise ValueError(f"coef shape {coef.shape} does not match {nodes.size} nodes")
    s = 1.0 if sign > 0 else -1.0
    out = np.empty((coef.shape[0], freqs.size), dtype=np.complex128)
    step = max(1, _BLOCK_ENTRIES // max(1, nodes.size))
    for j0 in range(0, freqs.size, step):
        phase = np.outer(nodes, freqs[j0:j0 + step])
        out[:, j0:j0 + step] = coef @ (np.cos(phase) + 1j * s * np.sin(phase))
    return out


def conv_point(fw, kq, dw, y, k):
    """Dense double sum sum_q fw[q] sum_p dw[p] exp(-1j (k - kq[q]) y[p])."""
    kappa = k - np.asarray(kq, dtype=np.float64)
    kernel = trig_sum(np.asarray(dw, dtype=np.complex128)[None, :], y, kappa, -1)[0]
    return np.dot(np.asarray(fw, dtype=np.complex128), kernel)
