"""Pure-Python cyclic Jacobi kernel for complex Hermitian matrices.

Reference implementation of the algorithm in ``_jacobi_cy.pyx``; selected
by :mod:`steermap.linalg` when the compiled twin is unavailable.  Both
kernels mutate their input in place and perform no validation.
"""

import math

import numpy as np


def _off_max(a, n):
    off = 0.0
    for p in range(n):
        for q in range(p + 1, n):
            m = abs(a[p, q])
            if m > off:
                off = m
    return off


def jacobi_eigh(a, max_sweeps, tol):
    """Diagonalize a Hermitian matrix by cyclic Jacobi rotations.

    ``a`` is an (n, n) complex128 array, overwritten during iteration.
    Returns ``(diag, vecs, off, sweeps)`` where ``diag`` holds the
    unsorted real diagonal after the final sweep, ``vecs`` the
    accumulated unitary (eigenvectors in columns, same order), ``off``
    the achieved max-abs off-diagonal and ``sweeps`` the number of full
    sweeps performed.  Convergence (``off < tol``) is the caller's check.
    """
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    sweeps = 0
    while sweeps < max_sweeps:
        if _off_max(a, n) < tol:
            break
        for p in range(n):
            for q in range(p + 1, n):
                beta = a[p, q]
                ab = abs(beta)
                if ab <= tol:
                    continue
                # Unitary 2x2 rotation zeroing a[p, q]: diagonal entries
                # cos(t), off-diagonal +-sin(t) e^{+-i arg(beta)}.
                phase = beta / ab
                alpha = a[p, p].real
                gamma = a[q, q].real
                theta = 0.5 * math.atan2(2.0 * ab, gamma - alpha)
                c = math.cos(theta)
                s = math.sin(theta)
                sph = s * phase
                sphc = s * phase.conjugate()
                for i in range(n):
                    if i == p or i == q:
                        continue
                    aip = a[i, p]
                    aiq = a[i, q]
                    a[i, p] = c * aip - sphc * aiq
                    a[i, q] = sph * aip + c * aiq
                    a[p, i] = a[i, p].conjugate()
                    a[q, i] = a[i, q].conjugate()
                app = c * c * alpha - 2.0 * c * s * ab + s * s * gamma
                aqq = s * s * alpha + 2.0 * c * s * ab + c * c * gamma
                a[p, p] = app
                a[q, q] = aqq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for i in range(n):
                    vip = v[i, p]
                    viq = v[i, q]
                    v[i, p] = c * vip - sphc * viq
                    v[i, q] = sph * vip + c * viq
        sweeps += 1
    diag = np.array([a[i, i].real for i in range(n)])
    return diag, v, _off_max(a, n), sweeps
