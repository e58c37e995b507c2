"""Dense complex matrix kernel for small bipartite operators.

Matrices are plain numpy ``complex128`` 2-D arrays, row-major, with
subsystem A always the left (slow-varying) tensor factor.  Construction
never normalizes or symmetrizes anything; callers validate explicitly.

The Hermitian eigensolver is a self-contained cyclic Jacobi iteration so
the whole numeric core stays auditable.  It exists twice: a compiled
Cython kernel and a pure-Python fallback with identical semantics.  The
compiled one is picked at import time when present (override with the
environment variable ``STEERMAP_PURE_PYTHON=1``).
"""

from __future__ import annotations

import os

import numpy as np

if os.environ.get("STEERMAP_PURE_PYTHON"):
    from . import _jacobi_py as _jacobi_impl

    HAVE_COMPILED_KERNEL = False
else:
    try:
        from . import _jacobi_cy as _jacobi_impl

        HAVE_COMPILED_KERNEL = True
    except ImportError:
        from . import _jacobi_py as _jacobi_impl

        HAVE_COMPILED_KERNEL = False

HERMITICITY_TOL = 1e-12
OFFDIAG_TOL = 1e-14
MAX_SWEEPS = 100


class JacobiConvergenceError(RuntimeError):
    """Jacobi iteration did not reach the off-diagonal target."""

    def __init__(self, off: float, sweeps: int):
        self.off = off
        self.sweeps = sweeps
        super().__init__(
            f"Jacobi did not converge after {sweeps} sweeps "
            f"(off-diagonal max-abs {off:.3e})"
        )


def kernel_name() -> str:
    """Name of the active eigensolver kernel ('compiled' or 'python')."""
    return "compiled" if HAVE_COMPILED_KERNEL else "python"


def as_matrix(m) -> np.ndarray:
    """Coerce to a complex128 2-D array (C-contiguous copy-free if possible)."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={a.ndim}")
    return a


def hermiticity_defect(m) -> float:
    """Max-abs entry of m - m^dagger."""
    a = as_matrix(m)
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def is_hermitian(m, tol: float = HERMITICITY_TOL) -> bool:
    return hermiticity_defect(m) <= tol


def kron(a, b) -> np.ndarray:
    """Kronecker product, A the left (slow) factor."""
    return np.kron(as_matrix(a), as_matrix(b))


def _check_bipartite(m: np.ndarray, d_a: int, d_b: int) -> None:
    n = d_a * d_b
    if m.shape != (n, n):
        raise ValueError(
            f"matrix shape {m.shape} does not match dims {d_a}x{d_b} "
            f"(expected {n}x{n})"
        )


def partial_trace(m, d_a: int, d_b: int, keep: str = "B") -> np.ndarray:
    """Trace out one subsystem of a (d_a*d_b) x (d_a*d_b) matrix.

    keep='B' returns the d_b x d_b operator tr_A[m]; keep='A' the
    d_a x d_a operator tr_B[m].  The full trace is preserved.
    """
    a = as_matrix(m)
    _check_bipartite(a, d_a, d_b)
    t = a.reshape(d_a, d_b, d_a, d_b)
    if keep == "B":
        return np.einsum("ibid->bd", t)
    if keep == "A":
        return np.einsum("ibkb->ik", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def partial_transpose(m, d_a: int, d_b: int, on: str = "B") -> np.ndarray:
    """Transpose one tensor factor in place; involutive, trace preserving."""
    a = as_matrix(m)
    _check_bipartite(a, d_a, d_b)
    t = a.reshape(d_a, d_b, d_a, d_b)
    if on == "B":
        return t.transpose(0, 3, 2, 1).reshape(a.shape)
    if on == "A":
        return t.transpose(2, 1, 0, 3).reshape(a.shape)
    raise ValueError(f"on must be 'A' or 'B', got {on!r}")


def hermitian_eigen(m, max_sweeps: int = MAX_SWEEPS):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(w, v)`` with real eigenvalues ``w`` ascending and
    eigenvectors in the columns of ``v`` (same order).  Raises
    ``ValueError`` for non-Hermitian input (defect > 1e-12) and
    :class:`JacobiConvergenceError` if the off-diagonal max-abs is still
    >= 1e-14 after ``max_sweeps`` sweeps.
    """
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    defect = hermiticity_defect(a)
    if defect > HERMITICITY_TOL:
        raise ValueError(f"matrix is not Hermitian (defect {defect:.3e})")
    work = np.array(a, dtype=np.complex128, order="C", copy=True)
    diag, v, off, sweeps = _jacobi_impl.jacobi_eigh(work, max_sweeps, OFFDIAG_TOL)
    if off >= OFFDIAG_TOL:
        raise JacobiConvergenceError(off, sweeps)
    order = np.argsort(diag, kind="stable")
    return diag[order], v[:, order]


def trace_norm(m) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    w, _ = hermitian_eigen(m)
    return float(np.sum(np.abs(w)))
