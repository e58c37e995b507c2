"""Bipartite density matrices, canonical families and qubit Bloch algebra.

All states are immutable value objects over numpy arrays.  Random
constructions take an explicit seed; there is no global RNG state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import linalg

HERM_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
BLOCH_TOL = 1e-12

IDENTITY_2 = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


class StateValidationError(ValueError):
    """A density-matrix invariant failed; names it and the deviation."""

    def __init__(self, invariant: str, deviation: float):
        self.invariant = invariant
        self.deviation = deviation
        super().__init__(f"invariant violated: {invariant} (deviation {deviation:.3e})")


@dataclass(frozen=True)
class BlochVector:
    """Real 3-vector r with qubit state (1 + r.sigma)/2."""

    rx: float
    ry: float
    rz: float

    def norm_sq(self) -> float:
        return self.rx * self.rx + self.ry * self.ry + self.rz * self.rz

    def is_physical(self, tol: float = BLOCH_TOL) -> bool:
        return self.norm_sq() <= 1.0 + tol

    def as_array(self) -> np.ndarray:
        return np.array([self.rx, self.ry, self.rz])


@dataclass(frozen=True)
class DensityMatrix:
    """Validated bipartite state; subsystem A is the left tensor factor."""

    d_a: int
    d_b: int
    mat: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.d_a * self.d_b

    def reduced_a(self) -> np.ndarray:
        return linalg.partial_trace(self.mat, self.d_a, self.d_b, keep="A")

    def reduced_b(self) -> np.ndarray:
        return linalg.partial_trace(self.mat, self.d_a, self.d_b, keep="B")


def make_density(mat, d_a: int, d_b: int) -> DensityMatrix:
    """Validate and wrap a matrix as a DensityMatrix.

    Checks, in order: shape, hermiticity (1e-10), unit trace (1e-10) and
    positive semidefiniteness (min eigenvalue >= -1e-10).  Raises
    :class:`StateValidationError` naming the first failed invariant.
    """
    if d_a < 2 or d_b < 2:
        raise ValueError(f"subsystem dims must be >= 2, got {d_a}x{d_b}")
    m = linalg.as_matrix(mat)
    n = d_a * d_b
    if m.shape != (n, n):
        raise StateValidationError(
            f"shape {m.shape} != ({n}, {n})", float(abs(m.shape[0] - n))
        )
    defect = linalg.hermiticity_defect(m)
    if defect > HERM_TOL:
        raise StateValidationError("hermitian within 1e-10", defect)
    tr_dev = abs(float(np.trace(m).real) - 1.0) + abs(float(np.trace(m).imag))
    if tr_dev > TRACE_TOL:
        raise StateValidationError("trace = 1 within 1e-10", tr_dev)
    # Symmetrize before the spectral check: the eigensolver insists on a
    # tighter hermiticity (1e-12) than the state tolerance admits.
    sym = (m + m.conj().T) / 2.0
    w, _ = linalg.hermitian_eigen(sym)
    if w[0] < -PSD_TOL:
        raise StateValidationError("min eigenvalue >= -1e-10", float(-w[0]))
    out = np.array(m, dtype=np.complex128, copy=True)
    out.setflags(write=False)
    return DensityMatrix(d_a, d_b, out)


def pure_state(vec) -> np.ndarray:
    """Projector |v><v| of a normalized state vector."""
    v = np.asarray(vec, dtype=np.complex128).reshape(-1)
    return np.outer(v, v.conj())


def bell_phi_plus() -> DensityMatrix:
    """(|00> + |11>)/sqrt(2) projector as a 2x2 state."""
    v = np.array([1, 0, 0, 1], dtype=np.complex128) / np.sqrt(2)
    return make_density(pure_state(v), 2, 2)


def singlet() -> DensityMatrix:
    """(|01> - |10>)/sqrt(2) projector."""
    v = np.array([0, 1, -1, 0], dtype=np.complex128) / np.sqrt(2)
    return make_density(pure_state(v), 2, 2)


def werner(p: float) -> DensityMatrix:
    """p * singlet + (1-p) * I/4 for visibility p in [0, 1]."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"visibility must be in [0, 1], got {p}")
    mat = p * singlet().mat + (1.0 - p) * np.eye(4, dtype=np.complex128) / 4.0
    return make_density(mat, 2, 2)


def bloch_from_qubit(m) -> tuple[float, BlochVector]:
    """Decompose a Hermitian 2x2 matrix as t*I + rx*sx + ry*sy + rz*sz.

    Round-trips exactly to 1e-14: qubit_from_bloch(t, r) reproduces m.
    """
    a = linalg.as_matrix(m)
    if a.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {a.shape}")
    defect = linalg.hermiticity_defect(a)
    if defect > HERM_TOL:
        raise ValueError(f"matrix is not Hermitian (defect {defect:.3e})")
    t = float((a[0, 0].real + a[1, 1].real) / 2.0)
    rx = float(a[0, 1].real)
    ry = float(-a[0, 1].imag)
    rz = float((a[0, 0].real - a[1, 1].real) / 2.0)
    return t, BlochVector(rx, ry, rz)


def qubit_from_bloch(t: float, r: BlochVector) -> np.ndarray:
    """Inverse of bloch_from_qubit: t*I + r.sigma."""
    return t * IDENTITY_2 + r.rx * SIGMA_X + r.ry * SIGMA_Y + r.rz * SIGMA_Z


def hidden_qubit(r: BlochVector) -> np.ndarray:
    """Qubit density matrix (1 + r.sigma)/2 for a physical Bloch vector."""
    return (IDENTITY_2 + r.rx * SIGMA_X + r.ry * SIGMA_Y + r.rz * SIGMA_Z) / 2.0


def conditional_state(rho: DensityMatrix, pi_a) -> np.ndarray:
    """Bob's unnormalized steered state tr_A[(pi_a x 1) rho].

    ``pi_a`` must be a Hermitian idempotent d_a x d_a projector (1e-10);
    the trace of the result is the outcome probability.
    """
    pi = linalg.as_matrix(pi_a)
    if pi.shape != (rho.d_a, rho.d_a):
        raise ValueError(
            f"projector shape {pi.shape} does not match d_a={rho.d_a}"
        )
    defect = linalg.hermiticity_defect(pi)
    if defect > HERM_TOL:
        raise ValueError(f"projector is not Hermitian (defect {defect:.3e})")
    idem = float(np.max(np.abs(pi @ pi - pi)))
    if idem > HERM_TOL:
        raise ValueError(f"projector is not idempotent (defect {idem:.3e})")
    big = linalg.kron(pi, np.eye(rho.d_b, dtype=np.complex128))
    return linalg.partial_trace(big @ rho.mat, rho.d_a, rho.d_b, keep="B")


def random_pure(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Rank-1 density matrix from normalized complex normal deviates."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    v /= np.linalg.norm(v)
    return pure_state(v)


def random_separable(
    d_a: int, d_b: int, k: int, seed: int
) -> tuple[DensityMatrix, list[tuple[float, np.ndarray, np.ndarray]]]:
    """Random k-member separable mixture sum_i w_i alpha_i x beta_i.

    Weights are a random simplex point, factors random pure states;
    deterministic for a fixed seed.  The ensemble is returned alongside
    the assembled state because decomposition recovery is not supported.
    """
    if k < 1:
        raise ValueError(f"ensemble size must be >= 1, got {k}")
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(k))
    ensemble = []
    mat = np.zeros((d_a * d_b, d_a * d_b), dtype=np.complex128)
    for w in weights:
        alpha = random_pure(d_a, rng)
        beta = random_pure(d_b, rng)
        ensemble.append((float(w), alpha, beta))
        mat += w * linalg.kron(alpha, beta)
    return make_density(mat, d_a, d_b), ensemble


def state_to_json(rho: DensityMatrix) -> str:
    """Serialize as {"dims": [dA, dB], "re": [[...]], "im": [[...]]}."""
    payload = {
        "dims": [rho.d_a, rho.d_b],
        "re": rho.mat.real.tolist(),
        "im": rho.mat.imag.tolist(),
    }
    return json.dumps(payload)


def state_from_json(text: str) -> DensityMatrix:
    """Parse and fully validate the state JSON format."""
    data = json.loads(text)
    if not isinstance(data, dict):
        raise ValueError("state JSON must be an object")
    for key in ("dims", "re", "im"):
        if key not in data:
            raise ValueError(f"state JSON missing field {key!r}")
    dims = data["dims"]
    if not (isinstance(dims, list) and len(dims) == 2):
        raise ValueError(f"'dims' must be a two-element list, got {dims!r}")
    d_a, d_b = int(dims[0]), int(dims[1])
    re = np.asarray(data["re"], dtype=float)
    im = np.asarray(data["im"], dtype=float)
    if re.shape != im.shape or re.ndim != 2:
        raise ValueError(
            f"'re'/'im' must be equal-shape 2-D arrays, got {re.shape} and {im.shape}"
        )
    return make_density(re + 1j * im, d_a, d_b)


def save_state(rho: DensityMatrix, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(state_to_json(rho))


def load_state(path) -> DensityMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        return state_from_json(fh.read())
