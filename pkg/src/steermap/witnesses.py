"""Detectors for the three correlation layers.

These are sufficient-condition witnesses, not deciders: a value below
threshold never proves a state local, unsteerable or separable.  The one
exception is the Werner-family steering oracle, an external literature
threshold kept in its own function so dependent tests can declare where
the number comes from.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .states import PAULIS, DensityMatrix

CHSH_THRESHOLD = 2.0
F3_THRESHOLD = math.sqrt(3.0)
NEGATIVITY_THRESHOLD = 0.0


@dataclass(frozen=True)
class WitnessReport:
    """Witness values for one state; None marks a non-applicable detector."""

    negativity: float
    chsh: float | None
    f3: float | None

    def to_json(self) -> str:
        payload = {"negativity": self.negativity}
        if self.chsh is not None:
            payload["chsh"] = self.chsh
        if self.f3 is not None:
            payload["f3"] = self.f3
        return json.dumps(payload)


def _symmetrized(m: np.ndarray) -> np.ndarray:
    # Input states may carry hermiticity defects up to the 1e-10 state
    # tolerance; the eigensolver wants 1e-12.
    return (m + m.conj().T) / 2.0


def negativity(rho: DensityMatrix) -> float:
    """Entanglement witness (||rho^T_B||_1 - 1)/2, clamped at 0.

    Positive negativity certifies entanglement; for 2x2 and 2x3 systems
    the converse holds as well.  Partial transpose is taken on B (the
    spectrum is the same either way; fixed for determinism).
    """
    pt = linalg.partial_transpose(rho.mat, rho.d_a, rho.d_b, on="B")
    return max(0.0, (linalg.trace_norm(_symmetrized(pt)) - 1.0) / 2.0)


def correlation_matrix(rho: DensityMatrix) -> np.ndarray:
    """T[j, k] = tr[(sigma_j x sigma_k) rho] for a two-qubit state."""
    if (rho.d_a, rho.d_b) != (2, 2):
        raise ValueError(f"needs a 2x2 state, got {rho.d_a}x{rho.d_b}")
    t = np.zeros((3, 3))
    for j in range(3):
        for k in range(3):
            t[j, k] = float(np.trace(linalg.kron(PAULIS[j], PAULIS[k]) @ rho.mat).real)
    return t


def chsh_horodecki(rho: DensityMatrix) -> float:
    """Largest CHSH value 2 sqrt(m1 + m2) reachable with projective settings.

    m1, m2 are the two largest eigenvalues of T^T T built from the
    correlation matrix; a value above 2 certifies Bell nonlocality of a
    two-qubit state.
    """
    t = correlation_matrix(rho)
    w, _ = linalg.hermitian_eigen(t.T @ t)
    return 2.0 * math.sqrt(max(0.0, float(w[-1] + w[-2])))


def f3_steering(rho: DensityMatrix) -> float:
    """Three-setting linear steering functional sum_k ||tr_B[(1 x sigma_k) rho]||_1.

    Bob must hold a qubit; a value above sqrt(3) certifies that Alice
    can steer Bob using dichotomic observables on her side.
    """
    if rho.d_b != 2:
        raise ValueError(f"needs a qubit on Bob's side, got d_b={rho.d_b}")
    total = 0.0
    eye_a = np.eye(rho.d_a, dtype=np.complex128)
    for k in range(3):
        c_k = linalg.partial_trace(
            linalg.kron(eye_a, PAULIS[k]) @ rho.mat, rho.d_a, rho.d_b, keep="A"
        )
        total += linalg.trace_norm(_symmetrized(c_k))
    return total


def werner_steerable_oracle(v: float) -> bool:
    """Exact steering boundary of the Werner family under projective settings.

    External literature threshold: steerable iff visibility > 1/2
    (strict; the boundary point itself is unsteerable).  Not derivable
    from anything in this package.
    """
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"visibility must be in [0, 1], got {v}")
    return v > 0.5


def witness_report(rho: DensityMatrix) -> WitnessReport:
    """Run every applicable detector on one state."""
    chsh = chsh_horodecki(rho) if (rho.d_a, rho.d_b) == (2, 2) else None
    f3 = f3_steering(rho) if rho.d_b == 2 else None
    return WitnessReport(negativity=negativity(rho), chsh=chsh, f3=f3)
