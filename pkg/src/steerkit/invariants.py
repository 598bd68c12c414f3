"""Seeded invariant suite run against a single state (backs ``steerkit verify``).

Trial ``t`` draws its randomness from ``default_rng(seed + t)``, so a suite
is reproducible and any single trial can be replayed in isolation.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import antilinear as al
from . import steering as st
from .numerics import DEFAULT_TOL, TolerancePolicy, max_abs
from .sampling import random_unit, random_unitary
from .state import BipartiteState, reduced_density, schmidt


@dataclass
class Check:
    name: str
    tolerance: float
    max_residual: float = 0.0
    evaluations: int = 0

    def record(self, residual: float):
        self.max_residual = max(self.max_residual, float(residual))
        self.evaluations += 1

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "evaluations": self.evaluations,
            "passed": self.passed,
        }


def _null_space(q1: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(np.eye(q1.shape[0]) - q1)
    return v[:, w > 0.5]


def run_suite(state: BipartiteState, seed: int, trials: int,
              tol: TolerancePolicy = DEFAULT_TOL) -> list[Check]:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    names = {
        "antilinearity": 1e-12,
        "adjoint_pairing": 1e-12,
        "hs_norm": 1e-12,
        "oracle_probability": 1e-12,
        "oracle_state": 1e-10,
        "rank1_consistency": 1e-10,
        "additivity": 1e-11,
        "basis_total": 1e-10,
        "polar_right": 1e-10,
        "polar_left": 1e-10,
        "similarity": 1e-10,
        "antiunitarity": 1e-10,
        "null_padding_equivalence": 1e-9,
        "phase_nonequivalence": 0.0,
        "max_probability": 1e-12,
        "reach_target": 1e-9,
    }
    checks = {name: Check(name, t) for name, t in names.items()}
    d1, d2 = state.d1, state.d2
    a = al.from_state(state)
    a_dag = al.adjoint(a)

    checks["hs_norm"].record(abs(al.hs_norm_sq(a) - 1.0))
    polar = al.polar_factorize(a, state, tol)
    for key, value in al.factorization_residuals(a, polar).items():
        checks[key].record(value)
    checks["similarity"].record(al.check_similarity(polar, reduced_density(state, 1), reduced_density(state, 2)))
    checks["antiunitarity"].record(al.antiunitarity_residual(polar))

    sd = schmidt(state, tol)
    null = _null_space(polar.q1)

    for t in range(trials):
        rng = np.random.default_rng(seed + t)
        psi, chi = random_unit(rng, d1), random_unit(rng, d1)
        phi = random_unit(rng, d2)
        alpha, beta = rng.normal(size=2) + 1j * rng.normal(size=2)

        lhs = al.apply(a, alpha * psi + beta * chi)
        rhs = np.conj(alpha) * al.apply(a, psi) + np.conj(beta) * al.apply(a, chi)
        checks["antilinearity"].record(max_abs(lhs - rhs))
        pairing = np.vdot(al.apply(a, psi), phi) - np.conj(np.vdot(psi, al.apply(a_dag, phi)))
        checks["adjoint_pairing"].record(abs(pairing))

        # elementary event against the full-projector reference
        elem = st.steer_elementary(state, psi, tol)
        p_psi = np.outer(psi, psi.conj())
        if elem.possible:
            ref = st.trace_rule_oracle(state, p_psi, tol)
            checks["oracle_probability"].record(abs(elem.probability - ref.probability))
            checks["oracle_state"].record(max_abs(elem.distant_density() - ref.distant_density()))
            ev = st.steer_event(state, p_psi, tol)
            checks["rank1_consistency"].record(max_abs(ev.distant_density() - elem.distant_density()))

        # general event of random rank
        u = random_unitary(rng, d1)
        rank = int(rng.integers(1, d1 + 1))
        proj = u[:, :rank] @ u[:, :rank].conj().T
        if st.event_probability(state, proj) > tol.rank_cutoff ** 2:
            ev = st.steer_event(state, proj, tol)
            ref = st.trace_rule_oracle(state, proj, tol)
            checks["oracle_probability"].record(abs(ev.probability - ref.probability))
            checks["oracle_state"].record(max_abs(ev.distant_density() - ref.distant_density()))

        # additivity over orthogonal pieces, and totals over the whole basis
        split = int(rng.integers(0, d1 + 1))
        p_a, p_b = u[:, :split] @ u[:, :split].conj().T, u[:, split:] @ u[:, split:].conj().T
        total = st.event_probability(state, p_a + p_b)
        parts = st.event_probability(state, p_a) + st.event_probability(state, p_b)
        checks["additivity"].record(abs(total - parts))
        basis_sum = sum(st.steer_elementary(state, u[:, k], tol).probability for k in range(d1))
        checks["basis_total"].record(abs(basis_sum - 1.0))

        # equivalence classes and their most probable member
        support_part = polar.q1 @ psi
        if np.linalg.norm(support_part) > tol.rank_cutoff:
            if null.shape[1]:
                padded = support_part + null @ (rng.normal(size=null.shape[1]) + 1j * rng.normal(size=null.shape[1]))
                padded /= np.linalg.norm(padded)
                eq = st.steering_equivalent(state, psi, padded, tol)
                out1 = st.steer_elementary(state, psi, tol).distant_state
                out2 = st.steer_elementary(state, padded, tol).distant_state
                expected_c = np.linalg.norm(support_part) / np.linalg.norm(polar.q1 @ padded)
                checks["null_padding_equivalence"].record(
                    max(max_abs(out1 - out2), 1.0 if not eq.equivalent else abs(eq.scale - expected_c)))
                best, p_best = st.max_prob_representative(state, padded, tol)
                checks["max_probability"].record(max(0.0, st.steer_elementary(state, padded, tol).probability - p_best))
            theta = rng.uniform(0.1, 2 * np.pi - 0.1)
            rotated = np.exp(1j * theta) * psi
            checks["phase_nonequivalence"].record(1.0 if st.steering_equivalent(state, psi, rotated, tol).equivalent else 0.0)
            best, p_best = st.max_prob_representative(state, psi, tol)
            checks["max_probability"].record(max(0.0, elem.probability - p_best))

        # constructive reach of a random target in the support of rho_2
        coeffs = rng.normal(size=sd.rank) + 1j * rng.normal(size=sd.rank)
        target = sd.right @ coeffs
        target /= np.linalg.norm(target)
        psi1, _ = st.reach_target(state, target, tol)
        got = st.steer_elementary(state, psi1, tol).distant_state
        checks["reach_target"].record(max_abs(st.phase_align(got, target) - st.phase_align(target)))

    return list(checks.values())
