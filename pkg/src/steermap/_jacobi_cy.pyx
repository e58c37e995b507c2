# Compiled twin of _jacobi_py.jacobi_eigh.  Same contract: mutates the
# input matrix, returns (diag, vecs, off, sweeps), no validation.

import numpy as np

cimport cython
from libc.math cimport atan2, cos, sin, sqrt


cdef inline double _cabs(double complex z) nogil:
    return sqrt(z.real * z.real + z.imag * z.imag)


cdef double _off_max(double complex[:, ::1] a, Py_ssize_t n) nogil:
    cdef Py_ssize_t p, q
    cdef double off = 0.0, m
    for p in range(n):
        for q in range(p + 1, n):
            m = _cabs(a[p, q])
            if m > off:
                off = m
    return off


@cython.boundscheck(False)
@cython.wraparound(False)
def jacobi_eigh(a, Py_ssize_t max_sweeps, double tol):
    """Cyclic Jacobi diagonalization of a complex Hermitian matrix."""
    cdef double complex[:, ::1] am = a
    cdef Py_ssize_t n = am.shape[0]
    v_arr = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] vm = v_arr
    cdef Py_ssize_t sweeps = 0, p, q, i
    cdef double ab, alpha, gamma, theta, c, s
    cdef double complex beta, phase, sph, sphc, aip, aiq, vip, viq

    with nogil:
        while sweeps < max_sweeps:
            if _off_max(am, n) < tol:
                break
            for p in range(n):
                for q in range(p + 1, n):
                    beta = am[p, q]
                    ab = _cabs(beta)
                    if ab <= tol:
                        continue
                    phase = beta / ab
                    alpha = am[p, p].real
                    gamma = am[q, q].real
                    theta = 0.5 * atan2(2.0 * ab, gamma - alpha)
                    c = cos(theta)
                    s = sin(theta)
                    sph = s * phase
                    sphc = s * phase.conjugate()
                    for i in range(n):
                        if i == p or i == q:
                            continue
                        aip = am[i, p]
                        aiq = am[i, q]
                        am[i, p] = c * aip - sphc * aiq
                        am[i, q] = sph * aip + c * aiq
                        am[p, i] = am[i, p].conjugate()
                        am[q, i] = am[i, q].conjugate()
                    am[p, p] = c * c * alpha - 2.0 * c * s * ab + s * s * gamma
                    am[q, q] = s * s * alpha + 2.0 * c * s * ab + c * c * gamma
                    am[p, q] = 0.0
                    am[q, p] = 0.0
                    for i in range(n):
                        vip = vm[i, p]
                        viq = vm[i, q]
                        vm[i, p] = c * vip - sphc * viq
                        vm[i, q] = sph * vip + c * viq
            sweeps += 1

    diag = np.array([am[i, i].real for i in range(n)])
    return diag, v_arr, _off_max(am, n), sweeps
