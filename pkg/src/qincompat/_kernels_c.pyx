# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled estimation kernels; contract documented in _kernels_py."""

import numpy as np


def assemble_qu(dtilde, x, double support_tol=0.0):
    dt = np.ascontiguousarray(dtilde, dtype=np.complex128)
    xv = np.ascontiguousarray(x, dtype=np.float64)

    cdef const double complex[:, :, ::1] g = dt
    cdef const double[::1] w = xv
    cdef Py_ssize_t p = g.shape[0]
    cdef Py_ssize_t d = g.shape[1]

    q_arr = np.zeros((p, p), dtype=np.float64)
    u_arr = np.zeros((p, p), dtype=np.float64)
    buf_arr = np.empty(p, dtype=np.complex128)
    cdef double[:, ::1] q = q_arr
    cdef double[:, ::1] u = u_arr
    cdef double complex[::1] buf = buf_arr

    cdef Py_ssize_t i, j, a, b
    cdef double s, wq, wu, gr
    cdef double complex ga, z

    with nogil:
        for i in range(d):
            # diagonal pairs contribute to Q only (weight antisymmetric in U)
            s = w[i] + w[i]
            if s > support_tol:
                wq = 2.0 / s
                for a in range(p):
                    gr = g[a, i, i].real
                    for b in range(a, p):
                        q[a, b] += wq * gr * g[b, i, i].real
            for j in range(i + 1, d):
                s = w[i] + w[j]
                if s <= support_tol:
                    continue
                wq = 4.0 / s
                wu = 4.0 * (w[i] - w[j]) / (s * s)
                for a in range(p):
                    buf[a] = g[a, i, j]
                for a in range(p):
                    ga = buf[a]
                    for b in range(a, p):
                        z = ga * buf[b].conjugate()
                        q[a, b] += wq * z.real
                        u[a, b] += wu * z.imag
        for a in range(p):
            for b in range(a + 1, p):
                q[b, a] = q[a, b]
                u[b, a] = -u[a, b]

    return q_arr, u_arr
