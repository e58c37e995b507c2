"""The two mixing maps, their product partners and the (mu, c) region.

Map M mixes a qudit-qubit state with an unsteerable partner; map N mixes
a qubit-qudit state with a separable partner.  For the biased-partner
family (Alice response unchanged, partner's qubit responses unbiased in
x and y and z-biased by c) the constructed hidden-state Bloch vector is
affine in Bob's three response probabilities, so physicality over the
whole probability box is decided exactly at its 8 vertices.  Feasibility
is decided only for this family; general instances are checked by the
construction residuals in :mod:`steermap.constructions` instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .states import SIGMA_Z, BlochVector, DensityMatrix, make_density

INV_SQRT3 = 1.0 / math.sqrt(3.0)
FEAS_TOL = 1e-12

_BOX_VERTICES = tuple(
    (float(px), float(py), float(pz))
    for px in (0, 1)
    for py in (0, 1)
    for pz in (0, 1)
)


@dataclass(frozen=True)
class MapParams:
    """Mixing visibility mu and partner bias c, both in [0, 1]."""

    mu: float
    c: float

    def __post_init__(self):
        if not 0.0 <= self.mu <= 1.0:
            raise ValueError(f"mu must be in [0, 1], got {self.mu}")
        if not 0.0 <= self.c <= 1.0:
            raise ValueError(f"c must be in [0, 1], got {self.c}")


@dataclass(frozen=True)
class RegionPoint:
    """One grid point of the feasibility boundary scan."""

    mu: float
    c_numeric: float
    c_analytic: float

    @property
    def abs_err(self) -> float:
        return abs(self.c_numeric - self.c_analytic)


def _mix(state: DensityMatrix, partner: DensityMatrix, mu: float) -> DensityMatrix:
    if (state.d_a, state.d_b) != (partner.d_a, partner.d_b):
        raise ValueError(
            f"dimension mismatch: {state.d_a}x{state.d_b} vs "
            f"{partner.d_a}x{partner.d_b}"
        )
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"mu must be in [0, 1], got {mu}")
    mat = mu * state.mat + (1.0 - mu) * partner.mat
    return make_density(mat, state.d_a, state.d_b)


def map_m(tau: DensityMatrix, tau_prime: DensityMatrix, mu: float) -> DensityMatrix:
    """Convex mixture mu*tau + (1-mu)*tau_prime (nonlocality -> steering)."""
    return _mix(tau, tau_prime, mu)


def map_n(rho: DensityMatrix, rho_prime: DensityMatrix, mu: float) -> DensityMatrix:
    """Convex mixture mu*rho + (1-mu)*rho_prime (steering -> entanglement)."""
    return _mix(rho, rho_prime, mu)


def bob_biased_partner(tau: DensityMatrix, c: float) -> DensityMatrix:
    """Product partner tr_B[tau] (x) (1 + c sigma_z)/2 for a d x 2 state."""
    if tau.d_b != 2:
        raise ValueError(f"partner requires a qubit on Bob's side, got d_b={tau.d_b}")
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"c must be in [0, 1], got {c}")
    qubit = (np.eye(2, dtype=np.complex128) + c * SIGMA_Z) / 2.0
    return make_density(linalg.kron(tau.reduced_a(), qubit), tau.d_a, 2)


def alice_biased_partner(rho: DensityMatrix, c: float) -> DensityMatrix:
    """Product partner (1 + c sigma_z)/2 (x) tr_A[rho] for a 2 x d state."""
    if rho.d_a != 2:
        raise ValueError(f"partner requires a qubit on Alice's side, got d_a={rho.d_a}")
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"c must be in [0, 1], got {c}")
    qubit = (np.eye(2, dtype=np.complex128) + c * SIGMA_Z) / 2.0
    return make_density(linalg.kron(qubit, rho.reduced_b()), 2, rho.d_b)


def analytic_c_max(mu: float) -> float:
    """Closed-form bias bound (sqrt(1 - 2 mu^2) - mu) / (1 - mu).

    Defined for 0 <= mu <= 1/sqrt(3); 1 at mu=0, 0 at the right endpoint.
    """
    if mu < 0.0 or mu > INV_SQRT3 + 1e-12:
        raise ValueError(f"mu must be in [0, 1/sqrt(3)], got {mu}")
    radicand = max(0.0, 1.0 - 2.0 * mu * mu)
    return max(0.0, (math.sqrt(radicand) - mu) / (1.0 - mu))


def hidden_bloch_vector(
    px: float, py: float, pz: float, mu: float, c: float
) -> BlochVector:
    """Hidden-state Bloch vector for the biased-partner response family.

    ``px, py, pz`` are Bob's outcome-0 probabilities at the x, y, z
    settings; the partner contributes (1/2, 1/2, (1+c)/2).
    """
    for name, value in (("px", px), ("py", py), ("pz", pz), ("mu", mu), ("c", c)):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"{name} must be in [0, 1], got {value}")
    return BlochVector(
        2.0 * mu * px - mu,
        2.0 * mu * py - mu,
        2.0 * mu * pz + c - mu * c - mu,
    )


def feasible(mu: float, c: float) -> bool:
    """Whether every hidden state of the biased-partner family is physical.

    Each Bloch component is affine in one box variable, so the squared
    norm is convex over [0,1]^3 and maximal at a vertex; enumerating the
    8 vertices decides the universally quantified condition exactly.
    """
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"mu must be in [0, 1], got {mu}")
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"c must be in [0, 1], got {c}")
    zc = c - mu * c - mu
    worst = 0.0
    for px, py, pz in _BOX_VERTICES:
        rx = 2.0 * mu * px - mu
        ry = 2.0 * mu * py - mu
        rz = 2.0 * mu * pz + zc
        norm_sq = rx * rx + ry * ry + rz * rz
        if norm_sq > worst:
            worst = norm_sq
    return worst <= 1.0 + FEAS_TOL


def c_max_numeric(mu: float, tol: float = 1e-10) -> float:
    """Supremum bias c with feasible(mu, c), by bisection on [0, 1]."""
    if tol <= 0.0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    if not feasible(mu, 0.0):
        return 0.0
    if feasible(mu, 1.0):
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if feasible(mu, mid):
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def region_scan(n_grid: int = 200, bisect_tol: float = 1e-10) -> list[RegionPoint]:
    """Numeric vs analytic boundary over a uniform mu grid on [0, 1/sqrt(3)].

    Output is assembled by grid index and independent of evaluation
    order; each point is a pure computation.
    """
    if n_grid < 2:
        raise ValueError(f"grid needs at least 2 points, got {n_grid}")
    points = []
    for i in range(n_grid):
        mu = INV_SQRT3 * i / (n_grid - 1)
        points.append(RegionPoint(mu, c_max_numeric(mu, bisect_tol), analytic_c_max(mu)))
    return points


REGION_CSV_HEADER = "mu,c_max_numeric,c_max_analytic,abs_err"


def region_to_csv(points) -> str:
    """CSV rendering of a region scan, 12 significant digits."""
    lines = [REGION_CSV_HEADER]
    for pt in points:
        lines.append(
            f"{pt.mu:.12g},{pt.c_numeric:.12g},{pt.c_analytic:.12g},{pt.abs_err:.12g}"
        )
    return "\n".join(lines) + "\n"
