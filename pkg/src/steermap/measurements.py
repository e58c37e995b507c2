"""Projective measurements for qubits and qudits.

Outcomes are indices 0..d-1.  For qubit measurements along a direction
n the outcome-0 projector is (1 + n.sigma)/2, i.e. outcome 0 carries the
+1 sign.  Only projective measurements are supported.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .states import IDENTITY_2, PAULIS

PROJ_TOL = 1e-10


@dataclass(frozen=True)
class ProjMeasurement:
    """A complete set of orthogonal projectors, one per outcome."""

    dim: int
    projectors: tuple[np.ndarray, ...] = field(repr=False)

    @property
    def n_outcomes(self) -> int:
        return len(self.projectors)


def _validate(dim: int, projectors) -> ProjMeasurement:
    mats = tuple(linalg.as_matrix(p) for p in projectors)
    total = np.zeros((dim, dim), dtype=np.complex128)
    for i, p in enumerate(mats):
        if p.shape != (dim, dim):
            raise ValueError(f"projector {i} has shape {p.shape}, expected ({dim}, {dim})")
        herm = linalg.hermiticity_defect(p)
        if herm > PROJ_TOL:
            raise ValueError(f"projector {i} is not Hermitian (defect {herm:.3e})")
        idem = float(np.max(np.abs(p @ p - p)))
        if idem > PROJ_TOL:
            raise ValueError(f"projector {i} is not idempotent (defect {idem:.3e})")
        total += p
    comp = float(np.max(np.abs(total - np.eye(dim))))
    if comp > PROJ_TOL:
        raise ValueError(f"projectors do not sum to identity (defect {comp:.3e})")
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            cross = float(np.max(np.abs(mats[i] @ mats[j])))
            if cross > PROJ_TOL:
                raise ValueError(
                    f"projectors {i} and {j} are not orthogonal (overlap {cross:.3e})"
                )
    frozen = []
    for p in mats:
        q = np.array(p, copy=True)
        q.setflags(write=False)
        frozen.append(q)
    return ProjMeasurement(dim, tuple(frozen))


def qubit_measurement(n) -> ProjMeasurement:
    """Two-outcome qubit measurement along the unit direction n."""
    v = np.asarray(n, dtype=float).reshape(-1)
    if v.shape != (3,):
        raise ValueError(f"direction must be a 3-vector, got shape {v.shape}")
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > PROJ_TOL:
        raise ValueError(f"direction must be a unit vector (norm {norm!r})")
    n_sigma = v[0] * PAULIS[0] + v[1] * PAULIS[1] + v[2] * PAULIS[2]
    return _validate(2, ((IDENTITY_2 + n_sigma) / 2.0, (IDENTITY_2 - n_sigma) / 2.0))


_PAULI_SETTINGS: tuple[ProjMeasurement, ...] | None = None


def pauli_settings() -> tuple[ProjMeasurement, ProjMeasurement, ProjMeasurement]:
    """The fixed x, y, z qubit settings, in that order.

    Built once and shared; measurements are immutable value objects.
    """
    global _PAULI_SETTINGS
    if _PAULI_SETTINGS is None:
        _PAULI_SETTINGS = (
            qubit_measurement((1.0, 0.0, 0.0)),
            qubit_measurement((0.0, 1.0, 0.0)),
            qubit_measurement((0.0, 0.0, 1.0)),
        )
    return _PAULI_SETTINGS


PAULI_LABELS = ("x", "y", "z")


def pauli_setting(label: str) -> ProjMeasurement:
    """The named qubit setting for label 'x', 'y' or 'z'."""
    try:
        idx = PAULI_LABELS.index(label)
    except ValueError:
        raise ValueError(f"unknown qubit setting label {label!r}") from None
    return pauli_settings()[idx]


def qudit_measurement(basis) -> ProjMeasurement:
    """Rank-1 projective measurement from an orthonormal basis.

    ``basis`` is a sequence of d vectors of length d; vector i becomes
    the outcome-i projector.
    """
    vecs = [np.asarray(v, dtype=np.complex128).reshape(-1) for v in basis]
    d = len(vecs)
    for i, v in enumerate(vecs):
        if v.shape != (d,):
            raise ValueError(f"basis vector {i} has length {v.shape[0]}, expected {d}")
    gram = np.array([[vecs[i].conj() @ vecs[j] for j in range(d)] for i in range(d)])
    defect = float(np.max(np.abs(gram - np.eye(d))))
    if defect > PROJ_TOL:
        raise ValueError(f"basis is not orthonormal (Gram defect {defect:.3e})")
    return _validate(d, tuple(np.outer(v, v.conj()) for v in vecs))


def random_direction(rng: np.random.Generator) -> np.ndarray:
    """Uniform random unit 3-vector."""
    while True:
        v = rng.standard_normal(3)
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            return v / norm


def random_basis(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random orthonormal basis (rows) via QR of a Gaussian matrix."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    return q.T.copy()


def random_qudit_measurement(dim: int, rng: np.random.Generator) -> ProjMeasurement:
    """Random rank-1 projective measurement on a d-level system."""
    return qudit_measurement(random_basis(dim, rng))
