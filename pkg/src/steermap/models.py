"""Finite hidden-variable models and their joint-probability evaluators.

A model is a finite ensemble: weights over a hidden index plus one
response per party and hidden value.  A response is either quantum (a
density matrix; probabilities come from the Born rule) or an explicit
table over a declared finite set of settings.  Which combination is
present decides what the model certifies:

  both parties quantum   -> separable-model (SPM) witness
  only Bob quantum       -> local-hidden-state (LHS) model
  otherwise              -> local-hidden-variable (LHV) model

The hidden variable is always a finite index; ensemble integrals become
finite sums, which lets every construction be checked pointwise.

Settings: a quantum response accepts a ProjMeasurement, or (for qubits)
one of the labels 'x', 'y', 'z' which resolve to the fixed Pauli
settings.  A table response accepts exactly the labels it declares.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .measurements import PAULI_LABELS, ProjMeasurement, pauli_setting
from .states import DensityMatrix, make_density

PROB_TOL = 1e-12


class SettingError(ValueError):
    """A setting could not be resolved against a response."""


@dataclass(frozen=True)
class QuantumResponse:
    """Born-rule response P(a | M, xi) = tr[M_a rho]."""

    rho: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.rho.shape[0]


@dataclass(frozen=True)
class TableResponse:
    """Explicit outcome distributions over a declared finite setting set."""

    table: dict[str, tuple[float, ...]] = field(repr=False)

    @property
    def settings(self) -> tuple[str, ...]:
        return tuple(self.table)


Response = QuantumResponse | TableResponse


def quantum_response(rho) -> QuantumResponse:
    """Validate a density matrix and wrap it as a response."""
    m = linalg.as_matrix(rho)
    defect = linalg.hermiticity_defect(m)
    if defect > 1e-10:
        raise ValueError(f"response state is not Hermitian (defect {defect:.3e})")
    tr = complex(np.trace(m))
    if abs(tr - 1.0) > 1e-10:
        raise ValueError(f"response state trace {tr} != 1")
    frozen = np.array(m, copy=True)
    frozen.setflags(write=False)
    return QuantumResponse(frozen)


def table_response(table: dict[str, tuple[float, ...]]) -> TableResponse:
    """Validate an explicit response table: probabilities, unit sums."""
    if not table:
        raise ValueError("response table declares no settings")
    clean = {}
    for setting, probs in table.items():
        row = tuple(float(p) for p in probs)
        for p in row:
            if p < -PROB_TOL or p > 1.0 + PROB_TOL:
                raise ValueError(f"probability {p} out of [0, 1] at setting {setting!r}")
        total = sum(row)
        if abs(total - 1.0) > PROB_TOL:
            raise ValueError(f"outcomes at setting {setting!r} sum to {total} != 1")
        clean[setting] = row
    return TableResponse(clean)


def _clamp_prob(value: float, context: str) -> float:
    if value < -PROB_TOL or value > 1.0 + PROB_TOL:
        raise ValueError(f"{context}: probability {value} exceeds tolerance")
    return min(max(value, 0.0), 1.0)


def response_prob(resp: Response, setting, outcome: int) -> float:
    """Evaluate P(outcome | setting) for one response."""
    if isinstance(resp, TableResponse):
        if not isinstance(setting, str) or setting not in resp.table:
            raise SettingError(
                f"setting {setting!r} not in declared set {tuple(resp.table)}"
            )
        row = resp.table[setting]
        if not 0 <= outcome < len(row):
            raise IndexError(f"outcome {outcome} out of range for {len(row)} outcomes")
        return row[outcome]
    if isinstance(setting, str):
        if resp.dim != 2 or setting not in PAULI_LABELS:
            raise SettingError(
                f"label {setting!r} only resolves to a Pauli setting on a qubit"
            )
        setting = pauli_setting(setting)
    if not isinstance(setting, ProjMeasurement):
        raise SettingError(f"cannot resolve setting {setting!r} for a quantum response")
    if setting.dim != resp.dim:
        raise ValueError(f"setting dim {setting.dim} != response dim {resp.dim}")
    if not 0 <= outcome < setting.n_outcomes:
        raise IndexError(
            f"outcome {outcome} out of range for {setting.n_outcomes} outcomes"
        )
    value = float(np.trace(setting.projectors[outcome] @ resp.rho).real)
    return _clamp_prob(value, "quantum response")


@dataclass(frozen=True)
class FiniteModel:
    """Finite hidden-variable ensemble: weights plus per-party responses."""

    weights: np.ndarray = field(repr=False)
    alice: tuple[Response, ...] = field(repr=False)
    bob: tuple[Response, ...] = field(repr=False)

    @property
    def n_hidden(self) -> int:
        return len(self.weights)

    @property
    def kind(self) -> str:
        """'SPM' if both sides quantum, 'LHS' if only Bob, else 'LHV'."""
        alice_q = all(isinstance(r, QuantumResponse) for r in self.alice)
        bob_q = all(isinstance(r, QuantumResponse) for r in self.bob)
        if alice_q and bob_q:
            return "SPM"
        if bob_q:
            return "LHS"
        return "LHV"


def finite_model(weights, alice, bob) -> FiniteModel:
    """Validate weights and assemble a FiniteModel."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise ValueError("weights must be a non-empty 1-D sequence")
    if np.any(w < -PROB_TOL):
        raise ValueError(f"negative weight {w.min()}")
    total = float(w.sum())
    if abs(total - 1.0) > PROB_TOL:
        raise ValueError(f"weights sum to {total} != 1")
    alice = tuple(alice)
    bob = tuple(bob)
    if len(alice) != w.size or len(bob) != w.size:
        raise ValueError(
            f"need one response per hidden value: {w.size} weights, "
            f"{len(alice)} alice, {len(bob)} bob"
        )
    w = w.copy()
    w.setflags(write=False)
    return FiniteModel(w, alice, bob)


def born_joint(
    rho: DensityMatrix, m_a: ProjMeasurement, m_b: ProjMeasurement, a: int, b: int
) -> float:
    """Joint outcome probability tr[(A_a x B_b) rho]."""
    if m_a.dim != rho.d_a or m_b.dim != rho.d_b:
        raise ValueError(
            f"measurement dims {m_a.dim}x{m_b.dim} do not match state "
            f"{rho.d_a}x{rho.d_b}"
        )
    if not 0 <= a < m_a.n_outcomes:
        raise IndexError(f"outcome a={a} out of range")
    if not 0 <= b < m_b.n_outcomes:
        raise IndexError(f"outcome b={b} out of range")
    op = linalg.kron(m_a.projectors[a], m_b.projectors[b])
    value = float(np.trace(op @ rho.mat).real)
    return _clamp_prob(value, "born_joint")


def model_joint(model: FiniteModel, setting_a, setting_b, a: int, b: int) -> float:
    """Hidden-variable joint probability sum_xi w_xi P(a|A,xi) P(b|B,xi)."""
    total = 0.0
    for xi in range(model.n_hidden):
        pa = response_prob(model.alice[xi], setting_a, a)
        pb = response_prob(model.bob[xi], setting_b, b)
        total += float(model.weights[xi]) * pa * pb
    return total


def model_from_separable(ensemble) -> FiniteModel:
    """Both-sides-quantum model indexed by a separable ensemble.

    ``ensemble`` is the (weight, alpha, beta) list produced by
    :func:`steermap.states.random_separable`.
    """
    members = list(ensemble)
    if not members:
        raise ValueError("ensemble is empty")
    weights = [w for w, _, _ in members]
    alice = [quantum_response(alpha) for _, alpha, _ in members]
    bob = [quantum_response(beta) for _, _, beta in members]
    return finite_model(weights, alice, bob)


def assemble_separable(ensemble, d_a: int, d_b: int) -> DensityMatrix:
    """Mix an ensemble back into its density matrix."""
    mat = np.zeros((d_a * d_b, d_a * d_b), dtype=np.complex128)
    for w, alpha, beta in ensemble:
        mat += w * linalg.kron(alpha, beta)
    return make_density(mat, d_a, d_b)


def bob_marginal(model: FiniteModel, dim: int) -> np.ndarray:
    """sum_xi w_xi rho^B_xi for a model with quantum Bob responses."""
    out = np.zeros((dim, dim), dtype=np.complex128)
    for xi in range(model.n_hidden):
        resp = model.bob[xi]
        if not isinstance(resp, QuantumResponse):
            raise ValueError("bob responses are not all quantum")
        out += model.weights[xi] * resp.rho
    return out
