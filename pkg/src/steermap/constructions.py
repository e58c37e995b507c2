"""Hidden-state and separable-model constructions, with numeric checks.

Given a finite model for a state and one for its mixing partner (sharing
the same hidden-variable weights), the builders below produce explicit
certificates: hidden qubit states as Bloch vectors plus the conditional
probabilities that reassemble the mixed state's statistics.  The
verifiers recompute both sides of the defining identities from scratch
and return the worst residual.

A caveat worth keeping in mind: the general recipe makes the hidden
state depend on Alice's setting and outcome through the ratio it is
built from.  For the biased-partner family (the partner reusing Alice's
responses) that dependence cancels and the ensemble is a genuine
single hidden-state model; the certificate stores the per-(setting,
outcome) states exactly as constructed so the cancellation can be
checked rather than assumed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .measurements import PAULI_LABELS, random_basis, random_direction
from .measurements import qubit_measurement, qudit_measurement
from .models import (
    FiniteModel,
    QuantumResponse,
    TableResponse,
    born_joint,
    finite_model,
    quantum_response,
    response_prob,
    table_response,
)
from .states import BlochVector, DensityMatrix, conditional_state, hidden_qubit

WEIGHT_TOL = 1e-12
PHYS_TOL = 1e-12


class UnphysicalHiddenStateError(ValueError):
    """A constructed hidden state left the Bloch ball.

    Signals that (mu, c) lies outside the range where the construction
    works; carries the offending hidden index, setting, outcome and
    squared Bloch norm.
    """

    def __init__(self, xi: int, setting, outcome: int, norm_sq: float):
        self.xi = xi
        self.setting = setting
        self.outcome = outcome
        self.norm_sq = norm_sq
        super().__init__(
            f"hidden state unphysical at xi={xi}, setting={setting}, "
            f"outcome={outcome}: |r|^2 = {norm_sq:.12g} > 1"
        )


def _check_shared_weights(model: FiniteModel, model_prime: FiniteModel) -> None:
    if model.n_hidden != model_prime.n_hidden:
        raise ValueError(
            f"models disagree on ensemble size: {model.n_hidden} vs "
            f"{model_prime.n_hidden}"
        )
    dev = float(np.max(np.abs(model.weights - model_prime.weights)))
    if dev > WEIGHT_TOL:
        raise ValueError(f"models must share hidden-variable weights (max dev {dev:.3e})")


def mixed_joint_prob(
    b_label: str,
    xi: int,
    a: int,
    alice_setting,
    mu: float,
    model: FiniteModel,
    model_prime: FiniteModel,
) -> float:
    """mu P(a|A,xi) P(0|B,xi) + (1-mu) P'(a|A,xi) P'(0|B,xi) for B in x,y,z."""
    if b_label not in PAULI_LABELS:
        raise ValueError(f"b_label must be one of {PAULI_LABELS}, got {b_label!r}")
    _check_shared_weights(model, model_prime)
    pa = response_prob(model.alice[xi], alice_setting, a)
    pb = response_prob(model.bob[xi], b_label, 0)
    pa_p = response_prob(model_prime.alice[xi], alice_setting, a)
    pb_p = response_prob(model_prime.bob[xi], b_label, 0)
    return mu * pa * pb + (1.0 - mu) * pa_p * pb_p


@dataclass(frozen=True)
class LhsCertificate:
    """Hidden-state ensemble for a mixed qudit-qubit state.

    ``responses[s, a, xi]`` is the conditional probability of outcome a
    at the s-th Alice setting; ``bloch[s, a, xi]`` the matching hidden
    qubit Bloch vector (zero rows mark skipped zero-probability entries).
    """

    weights: np.ndarray = field(repr=False)
    responses: np.ndarray = field(repr=False)
    bloch: np.ndarray = field(repr=False)

    @property
    def n_hidden(self) -> int:
        return len(self.weights)

    def hidden_state(self, s: int, a: int, xi: int) -> np.ndarray:
        r = self.bloch[s, a, xi]
        return hidden_qubit(BlochVector(r[0], r[1], r[2]))

    def to_json(self) -> str:
        return json.dumps(
            {
                "kind": "hidden-state",
                "weights": self.weights.tolist(),
                "responses": self.responses.tolist(),
                "bloch": self.bloch.tolist(),
            }
        )


def lhs_certificate(
    model_tau: FiniteModel,
    model_tau_prime: FiniteModel,
    mu: float,
    alice_settings,
) -> LhsCertificate:
    """Build the hidden-state ensemble for the M-mixture of two models.

    For every Alice setting, outcome and hidden value the conditional
    probability is the mu-mixture of the two models' responses and the
    hidden Bloch component for B is 2 eta(B)/p - 1.  Zero-probability
    entries contribute nothing and get the maximally mixed state.  An
    unphysical Bloch vector raises :class:`UnphysicalHiddenStateError`.
    """
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"mu must be in [0, 1], got {mu}")
    _check_shared_weights(model_tau, model_tau_prime)
    settings = list(alice_settings)
    if not settings:
        raise ValueError("need at least one Alice setting")
    n_out = settings[0].n_outcomes
    n_xi = model_tau.n_hidden
    bob_probs = [
        [response_prob(model_tau.bob[xi], lab, 0) for lab in PAULI_LABELS]
        for xi in range(n_xi)
    ]
    bob_probs_prime = [
        [response_prob(model_tau_prime.bob[xi], lab, 0) for lab in PAULI_LABELS]
        for xi in range(n_xi)
    ]
    responses = np.zeros((len(settings), n_out, n_xi))
    bloch = np.zeros((len(settings), n_out, n_xi, 3))
    for s, setting in enumerate(settings):
        if setting.n_outcomes != n_out:
            raise ValueError("alice settings disagree on outcome count")
        for xi in range(n_xi):
            pb = bob_probs[xi]
            pb_p = bob_probs_prime[xi]
            for a in range(n_out):
                pa = response_prob(model_tau.alice[xi], setting, a)
                pa_p = response_prob(model_tau_prime.alice[xi], setting, a)
                wp = mu * pa + (1.0 - mu) * pa_p
                responses[s, a, xi] = wp
                if wp <= 0.0:
                    continue  # zero weight in the ensemble sum; r stays 0
                for k in range(3):
                    eta = mu * pa * pb[k] + (1.0 - mu) * pa_p * pb_p[k]
                    bloch[s, a, xi, k] = 2.0 * eta / wp - 1.0
                norm_sq = float(np.dot(bloch[s, a, xi], bloch[s, a, xi]))
                if norm_sq > 1.0 + PHYS_TOL:
                    raise UnphysicalHiddenStateError(xi, s, a, norm_sq)
    return LhsCertificate(model_tau.weights.copy(), responses, bloch)


def verify_lhs_identity(
    rho_ab: DensityMatrix, cert: LhsCertificate, alice_settings
) -> float:
    """Worst-case residual of the steered-state decomposition.

    For every listed Alice setting and outcome, compares the conditional
    state of ``rho_ab`` against the certificate's weighted hidden-state
    sum; returns the max-abs entry difference over all of them.
    """
    if rho_ab.d_b != 2:
        raise ValueError(f"certificate targets a qubit on Bob's side, got {rho_ab.d_b}")
    settings = list(alice_settings)
    n_set, n_out, n_xi = cert.responses.shape
    if len(settings) != n_set:
        raise ValueError(f"certificate built for {n_set} settings, got {len(settings)}")
    worst = 0.0
    for s, setting in enumerate(settings):
        for a in range(n_out):
            lhs = conditional_state(rho_ab, setting.projectors[a])
            rhs = np.zeros((2, 2), dtype=np.complex128)
            for xi in range(n_xi):
                rhs += (
                    cert.responses[s, a, xi]
                    * cert.weights[xi]
                    * cert.hidden_state(s, a, xi)
                )
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


@dataclass(frozen=True)
class SpmCertificate:
    """Separable-model ensemble: hidden qubits for Alice, states for Bob."""

    weights: np.ndarray = field(repr=False)
    alice_bloch: np.ndarray = field(repr=False)
    bob_states: tuple[np.ndarray, ...] = field(repr=False)

    @property
    def n_hidden(self) -> int:
        return len(self.weights)

    def alice_state(self, xi: int) -> np.ndarray:
        r = self.alice_bloch[xi]
        return hidden_qubit(BlochVector(r[0], r[1], r[2]))

    def to_json(self) -> str:
        return json.dumps(
            {
                "kind": "separable",
                "weights": self.weights.tolist(),
                "alice_bloch": self.alice_bloch.tolist(),
                "bob_states": [
                    {"re": b.real.tolist(), "im": b.imag.tolist()}
                    for b in self.bob_states
                ],
            }
        )


def _same_bob_responses(model: FiniteModel, model_prime: FiniteModel) -> None:
    for xi in range(model.n_hidden):
        r, rp = model.bob[xi], model_prime.bob[xi]
        if isinstance(r, QuantumResponse) and isinstance(rp, QuantumResponse):
            dev = float(np.max(np.abs(r.rho - rp.rho)))
            if dev > WEIGHT_TOL:
                raise ValueError(f"bob responses differ at xi={xi} (max dev {dev:.3e})")
        elif isinstance(r, TableResponse) and isinstance(rp, TableResponse):
            if r.table != rp.table:
                raise ValueError(f"bob response tables differ at xi={xi}")
        else:
            raise ValueError(f"bob response kinds differ at xi={xi}")


def spm_certificate(
    model_rho: FiniteModel, model_rho_prime: FiniteModel, mu: float
) -> SpmCertificate:
    """Build the separable ensemble for the N-mixture of two models.

    Both inputs must carry identical quantum Bob responses and weights;
    Alice's hidden qubit per hidden value has Bloch components
    2 (mu P(0|k,xi) + (1-mu) P'(0|k,xi)) - 1 for k in x, y, z.
    """
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"mu must be in [0, 1], got {mu}")
    _check_shared_weights(model_rho, model_rho_prime)
    _same_bob_responses(model_rho, model_rho_prime)
    n_xi = model_rho.n_hidden
    alice_bloch = np.zeros((n_xi, 3))
    bob_states = []
    for xi in range(n_xi):
        bob = model_rho.bob[xi]
        if not isinstance(bob, QuantumResponse):
            raise ValueError(
                f"separable construction needs quantum Bob responses (xi={xi})"
            )
        bob_states.append(bob.rho)
        for k, lab in enumerate(PAULI_LABELS):
            p0 = response_prob(model_rho.alice[xi], lab, 0)
            p0_p = response_prob(model_rho_prime.alice[xi], lab, 0)
            alice_bloch[xi, k] = 2.0 * (mu * p0 + (1.0 - mu) * p0_p) - 1.0
        norm_sq = float(np.dot(alice_bloch[xi], alice_bloch[xi]))
        if norm_sq > 1.0 + PHYS_TOL:
            raise UnphysicalHiddenStateError(xi, "xyz", -1, norm_sq)
    return SpmCertificate(model_rho.weights.copy(), alice_bloch, tuple(bob_states))


def verify_spm_identity(
    sigma_ab: DensityMatrix, cert: SpmCertificate, n_samples: int, seed: int
) -> float:
    """Worst-case residual of the separable-model joint probabilities.

    Samples ``n_samples`` measurement pairs (random qubit direction for
    Alice, random orthonormal basis for Bob), evaluates all outcomes on
    both the state and the certificate ensemble, and returns the largest
    absolute difference.
    """
    if sigma_ab.d_a != 2:
        raise ValueError(f"certificate targets a qubit on Alice's side, got {sigma_ab.d_a}")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_samples):
        m_a = qubit_measurement(random_direction(rng))
        m_b = qudit_measurement(random_basis(sigma_ab.d_b, rng))
        for a in range(2):
            pa = [
                float(np.trace(m_a.projectors[a] @ cert.alice_state(xi)).real)
                for xi in range(cert.n_hidden)
            ]
            for b in range(sigma_ab.d_b):
                lhs = born_joint(sigma_ab, m_a, m_b, a, b)
                rhs = 0.0
                for xi in range(cert.n_hidden):
                    pb = float(np.trace(m_b.projectors[b] @ cert.bob_states[xi]).real)
                    rhs += float(cert.weights[xi]) * pa[xi] * pb
                worst = max(worst, abs(lhs - rhs))
    return worst


UNBIASED_QUBIT_TABLE = {"x": (0.5, 0.5), "y": (0.5, 0.5)}


def _biased_table(c: float) -> TableResponse:
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"c must be in [0, 1], got {c}")
    return table_response(
        {**UNBIASED_QUBIT_TABLE, "z": ((1.0 + c) / 2.0, (1.0 - c) / 2.0)}
    )


def bob_biased_prime_model(model: FiniteModel, c: float) -> FiniteModel:
    """Partner model for the Bob-side biased product partner.

    Reuses the base model's weights and Alice responses; Bob answers
    independently of the hidden value, unbiased at x and y and z-biased
    by c.  Matches the statistics of bob_biased_partner exactly.
    """
    table = _biased_table(c)
    return finite_model(model.weights, model.alice, (table,) * model.n_hidden)


def alice_biased_prime_model(model: FiniteModel, c: float) -> FiniteModel:
    """Partner model for the Alice-side biased product partner."""
    table = _biased_table(c)
    return finite_model(model.weights, (table,) * model.n_hidden, model.bob)


def vertex_witness_model(d_a: int) -> FiniteModel:
    """Single hidden-value model probing the worst box vertex.

    Bob answers outcome 0 deterministically at all of x, y, z (the
    vertex maximizing the hidden-state norm); Alice holds the maximally
    mixed qudit so every setting/outcome pair carries weight.  Feeding
    this together with its biased prime model into lhs_certificate
    raises for any (mu, c) outside the feasible region.
    """
    bob = table_response({"x": (1.0, 0.0), "y": (1.0, 0.0), "z": (1.0, 0.0)})
    alice = quantum_response(np.eye(d_a, dtype=np.complex128) / d_a)
    return finite_model([1.0], (alice,), (bob,))
