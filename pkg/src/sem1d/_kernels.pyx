# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled solver kernels: block-tridiagonal matvec and blockwise
Cholesky solves, the two operations inside every PCG iteration.

Contracts match `sem1d._kernels_py`.
"""

import cython


def block_tridiag_matvec(double[:, :, ::1] diag, double[:, :, ::1] upper,
                         double[:, :, ::1] lower, double[:, ::1] x,
                         double[:, ::1] out):
    """out = T x for the symmetric block-tridiagonal operator T.

    `lower` holds the transposes of the `upper` coupling blocks so every
    inner loop runs over contiguous memory.
    """
    cdef Py_ssize_t N = diag.shape[0]
    cdef Py_ssize_t p = diag.shape[1]
    cdef Py_ssize_t l, i, j
    cdef double acc
    for l in range(N):
        for i in range(p):
            acc = 0.0
            for j in range(p):
                acc += diag[l, i, j] * x[l, j]
            if l > 0:
                for j in range(p):
                    acc += lower[l - 1, i, j] * x[l - 1, j]
            if l < N - 1:
                for j in range(p):
                    acc += upper[l, i, j] * x[l + 1, j]
            out[l, i] = acc


def block_cholesky_solve(double[:, :, ::1] chol, double[:, ::1] r,
                         double[:, ::1] out):
    """Solve (L_l L_l^T) z_l = r_l per block with stored lower factors."""
    cdef Py_ssize_t N = chol.shape[0]
    cdef Py_ssize_t p = chol.shape[1]
    cdef Py_ssize_t l, i, j
    cdef double acc
    for l in range(N):
        for i in range(p):
            acc = r[l, i]
            for j in range(i):
                acc -= chol[l, i, j] * out[l, j]
            out[l, i] = acc / chol[l, i, i]
        for i in range(p - 1, -1, -1):
            acc = out[l, i]
            for j in range(i + 1, p):
                acc -= chol[l, j, i] * out[l, j]
            out[l, i] = acc / chol[l, i, i]
