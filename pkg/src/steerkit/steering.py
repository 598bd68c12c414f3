"""Schrodinger steering of the distant subsystem by selective local events."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .antilinear import adjoint, apply, from_state
from .errors import DimensionMismatch, NotProjector, NotUnit, NullComponent, OutsideSupport, ZeroProbability
from .numerics import DEFAULT_TOL, TolerancePolicy, as_matrix, as_vector, column_projector, max_abs
from .state import BipartiteState, DensityOp, partial_trace, schmidt

UNIT_TOL = 1e-10
EQUIVALENCE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Projector:
    matrix: np.ndarray

    def __post_init__(self):
        p = as_matrix(self.matrix, "projector")
        if p.shape[0] != p.shape[1]:
            raise NotProjector(f"projector must be square, got {p.shape}")
        if max_abs(p - p.conj().T) > 1e-10:
            raise NotProjector("projector is not Hermitian")
        if max_abs(p @ p - p) > 1e-10:
            raise NotProjector("projector is not idempotent")
        p.setflags(write=False)
        object.__setattr__(self, "matrix", p)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def rank(self) -> int:
        return int(round(np.trace(self.matrix).real))

    @classmethod
    def onto(cls, *vectors) -> "Projector":
        """Projector onto the span of the given vectors."""
        a = np.column_stack([np.asarray(v, complex) for v in vectors])
        q, r = np.linalg.qr(a)
        keep = np.abs(np.diag(r)) > 1e-12 * max(1.0, max_abs(r))
        return cls(column_projector(q[:, keep]))


@dataclass(frozen=True, eq=False)
class SteeringOutcome:
    """Result of a selective first-subsystem event.

    ``distant_state`` is a unit vector for elementary events, a
    :class:`DensityOp` for general projectors, and ``None`` when the event
    has (numerically) zero probability.
    """

    distant_state: np.ndarray | DensityOp | None
    probability: float

    @property
    def possible(self) -> bool:
        return self.distant_state is not None

    def distant_density(self) -> np.ndarray:
        """The distant state as a density matrix."""
        if self.distant_state is None:
            raise ZeroProbability("event is impossible; no distant state")
        if isinstance(self.distant_state, DensityOp):
            return self.distant_state.matrix
        v = self.distant_state
        return np.outer(v, v.conj())


class Equivalence(NamedTuple):
    equivalent: bool
    scale: float | None


def _unit(psi, dim: int, name: str = "psi") -> np.ndarray:
    psi = as_vector(psi, dim, name)
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > UNIT_TOL:
        raise NotUnit(f"{name} has norm {norm!r}, expected 1")
    return psi


def _as_projector(p1, dim: int) -> Projector:
    p1 = p1 if isinstance(p1, Projector) else Projector(p1)
    if p1.dim != dim:
        raise DimensionMismatch(f"projector acts on dimension {p1.dim}, state has d1 = {dim}")
    return p1


def phase_align(v, reference=None) -> np.ndarray:
    """Multiply ``v`` by the phase making ``reference``'s largest entry real positive.

    Without a reference, ``v`` aligns itself.
    """
    v = np.asarray(v, dtype=complex)
    ref = v if reference is None else np.asarray(reference, dtype=complex)
    j = int(np.argmax(np.abs(ref)))
    if ref[j] == 0:
        return v.copy()
    return v * (abs(ref[j]) / ref[j])


def steer_elementary(state: BipartiteState, psi1, tol: TolerancePolicy = DEFAULT_TOL) -> SteeringOutcome:
    """Distant state vector and probability for the event ``|psi1><psi1|``."""
    psi1 = _unit(psi1, state.d1, "psi1")
    image = apply(from_state(state), psi1)
    p = float(np.vdot(image, image).real)
    if p <= tol.rank_cutoff ** 2:
        return SteeringOutcome(None, p)
    return SteeringOutcome(image / np.sqrt(p), min(p, 1.0))


def event_probability(state: BipartiteState, p1) -> float:
    """``<Phi, (P1 (x) I) Phi>`` evaluated on the coefficient matrix."""
    p1 = _as_projector(p1, state.d1)
    c = state.coeffs
    return float(np.vdot(c, p1.matrix @ c).real)


def steer_event(state: BipartiteState, p1, tol: TolerancePolicy = DEFAULT_TOL) -> SteeringOutcome:
    """Conditional distant density operator ``p^{-1} A P1 A^dagger``."""
    p1 = _as_projector(p1, state.d1)
    p = event_probability(state, p1)
    if p <= tol.rank_cutoff ** 2:
        raise ZeroProbability(f"event probability {p:.3e} is numerically zero")
    a = from_state(state)
    a_dag = adjoint(a)
    columns = [apply(a, p1.matrix @ apply(a_dag, e)) for e in np.eye(state.d2, dtype=complex)]
    m = np.column_stack(columns) / p
    return SteeringOutcome(DensityOp(0.5 * (m + m.conj().T), 2), min(p, 1.0))


def trace_rule_oracle(state: BipartiteState, p1, tol: TolerancePolicy = DEFAULT_TOL) -> SteeringOutcome:
    """Reference path through the full ``d1*d2`` projector and explicit partial trace."""
    p1 = _as_projector(p1, state.d1)
    phi = state.vector
    big = np.outer(phi, phi.conj())
    event = np.kron(p1.matrix, np.eye(state.d2))
    p = float(np.trace(event @ big).real)
    if p <= tol.rank_cutoff ** 2:
        raise ZeroProbability(f"event probability {p:.3e} is numerically zero")
    conditional = partial_trace(big @ event, state.d1, state.d2, keep=2) / p
    return SteeringOutcome(DensityOp(conditional, 2), p)


def support_projector(state: BipartiteState, side: int = 1, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Range projector of rho_1 (``side=1``) or rho_2 (``side=2``)."""
    sd = schmidt(state, tol)
    return column_projector(sd.left if side == 1 else sd.right)


def _support_part(state, psi, tol, name):
    q1 = support_projector(state, 1, tol)
    part = q1 @ psi
    if np.linalg.norm(part) <= tol.rank_cutoff:
        raise NullComponent(f"{name} has no component in the support of rho_1")
    return part


def steering_equivalent(state: BipartiteState, psi, psi_prime,
                        tol: TolerancePolicy = DEFAULT_TOL,
                        atol: float = EQUIVALENCE_TOL) -> Equivalence:
    """Decide whether two local vectors steer the distant system identically.

    They do iff their support projections are positively collinear,
    ``Q1 psi = c Q1 psi'`` with real ``c > 0``.  A pure phase difference is
    *not* equivalence: the steered vectors then differ by the conjugate phase.
    """
    psi = _unit(psi, state.d1, "psi")
    psi_prime = _unit(psi_prime, state.d1, "psi_prime")
    a = _support_part(state, psi, tol, "psi")
    b = _support_part(state, psi_prime, tol, "psi_prime")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    same = np.linalg.norm(a / na - b / nb) <= atol
    return Equivalence(bool(same), float(na / nb) if same else None)


def max_prob_representative(state: BipartiteState, psi,
                            tol: TolerancePolicy = DEFAULT_TOL) -> tuple[np.ndarray, float]:
    """Most probable vector among those steering like ``psi``: its normalized support part."""
    psi = _unit(psi, state.d1, "psi")
    part = _support_part(state, psi, tol, "psi")
    best = part / np.linalg.norm(part)
    image = apply(from_state(state), best)
    return best, float(np.vdot(image, image).real)


def reach_target(state: BipartiteState, phi2,
                 tol: TolerancePolicy = DEFAULT_TOL) -> tuple[np.ndarray, float]:
    """Local vector in the support of rho_1 that steers the distant system into ``phi2``.

    Expanding ``phi2 = sum_k b_k v_k`` over the subsystem-2 Schmidt vectors,
    the preimage is ``sum_k conj(b_k / s_k) u_k`` up to normalization.
    """
    phi2 = _unit(phi2, state.d2, "phi2")
    sd = schmidt(state, tol)
    b = sd.right.conj().T @ phi2
    if np.linalg.norm(b) < 1.0 - EQUIVALENCE_TOL:
        raise OutsideSupport(f"target has weight {np.linalg.norm(b) ** 2:.12f} in the support of rho_2")
    pre = sd.left @ np.conj(b / sd.coefficients)
    psi1 = pre / np.linalg.norm(pre)
    image = apply(from_state(state), psi1)
    return psi1, float(np.vdot(image, image).real)
