# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: fused phase generation with BLAS-backed accumulation."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos
from scipy.linalg.cython_blas cimport zgemm

cnp.import_array()

ctypedef double complex cplx

# rows at or below this use the scalar fused loop instead of zgemm
cdef enum:
    SMALL_ROWS = 4
    BLOCK_ENTRIES = 1 << 20


cdef void _phase_block(const double[::1] nodes, const double[::1] freqs,
                       Py_ssize_t j0, Py_ssize_t nj, double s,
                       cplx[::1, :] phase) noexcept nogil:
    # Fortran-ordered (Q x nj) block for zgemm
    cdef Py_ssize_t q, j
    cdef double a
    for j in range(nj):
        for q in range(nodes.shape[0]):
            a = freqs[j0 + j] * nodes[q]
            phase[q, j] = cos(a) + 1j * (s * sin(a))


def trig_sum(coef, nodes, freqs, sign):
    """out[r, j] = sum_q coef[r, q] * exp(sign * 1j * freqs[j] * nodes[q])."""
    cdef cplx[:, ::1] c = np.ascontiguousarray(coef, dtype=np.complex128)
    cdef const double[::1] t = np.ascontiguousarray(nodes, dtype=np.float64)
    cdef const double[::1] w = np.ascontiguousarray(freqs, dtype=np.float64)
    if c.shape[1] != t.shape[0]:
        raise ValueError(f"coef shape {(c.shape[0], c.shape[1])} does not match "
                         f"{t.shape[0]} nodes")
    cdef Py_ssize_t R = c.shape[0], Q = t.shape[0], J = w.shape[0]
    cdef double s = 1.0 if sign > 0 else -1.0
    out_arr = np.zeros((R, J), dtype=np.complex128)
    cdef cplx[:, ::1] out = out_arr
    if R == 0 or J == 0 or Q == 0:
        return out_arr
    cdef Py_ssize_t r, q, j, j0, nj
    cdef double a, ca, sa
    cdef cplx acc, e

    if R <= SMALL_ROWS:
        with nogil:
            for j in range(J):
                for r in range(R):
                    acc = 0
                    for q in range(Q):
                        a = w[j] * t[q]
                        acc = acc + c[r, q] * (cos(a) + 1j * (s * sin(a)))
                    out[r, j] = acc
        return out_arr

    # row-major out (R x J) is column-major (J x R): compute out^T = P^T c^T
    cdef Py_ssize_t step = max(1, BLOCK_ENTRIES // Q)
    phase_arr = np.empty((Q, min(step, J)), dtype=np.complex128, order="F")
    cdef cplx[::1, :] phase = phase_arr
    cdef char transa = b'T'
    cdef char transb = b'N'
    cdef int m, n = <int>R, k = <int>Q, lda = <int>Q, ldb = <int>Q, ldc = <int>J
    cdef cplx alpha = 1.0, beta = 0.0
    j0 = 0
    while j0 < J:
        nj = min(step, J - j0)
        m = <int>nj
        with nogil:
            _phase_block(t, w, j0, nj, s, phase)
            # C(nj x R, ld=J) = phase^T (nj x Q) . coef^T (Q x R, ld=Q)
            zgemm(&transa, &transb, &m, &n, &k, &alpha,
                  &phase[0, 0], &lda, &c[0, 0], &ldb, &beta, &out[0, j0], &ldc)
        j0 += nj
    return out_arr


def conv_point(fw, kq, dw, y, double k):
    """Dense double sum sum_q fw[q] sum_p dw[p] exp(-1j (k - kq[q]) y[p])."""
    cdef const cplx[::1] f = np.ascontiguousarray(fw, dtype=np.complex128)
    cdef const double[::1] kk = np.ascontiguousarray(kq, dtype=np.float64)
    cdef const cplx[::1] d = np.ascontiguousarray(dw, dtype=np.complex128)
    cdef const double[::1] yy = np.ascontiguousarray(y, dtype=np.float64)
    if f.shape[0] != kk.shape[0] or d.shape[0] != yy.shape[0]:
        raise ValueError("weight/node length mismatch")
    cdef Py_ssize_t q, p
    cdef double a
    cdef cplx inner, total = 0
    with nogil:
        for q in range(kk.shape[0]):
            inner = 0
            for p in range(yy.shape[0]):
                a = (k - kk[q]) * yy[p]
                inner = inner + d[p] * (cos(a) - 1j * sin(a))
            total = total + f[q] * inner
    return complex(total)
