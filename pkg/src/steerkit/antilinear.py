"""Antilinear Hilbert-Schmidt representation of bipartite state vectors.

An antilinear map is stored as a matrix ``M`` with the fixed action
``A(psi) = M @ conj(psi)``.  Under this convention:

* the representative of a state with coefficient matrix ``C`` is ``M = C.T``
  (component ``n`` of ``A psi`` is ``sum_k C[k, n] * conj(psi[k])``);
* the adjoint, defined by ``<A psi, phi> = conj(<psi, A^dagger phi>)``, has
  matrix ``M.T``;
* composing with linear maps ``L`` gives ``L A -> L @ M`` and
  ``A L -> M @ conj(L)``; composing two antilinear maps gives the *linear*
  matrix ``M_A @ conj(M_B)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InconsistentInput
from .numerics import DEFAULT_TOL, TolerancePolicy, as_matrix, as_vector, column_projector, max_abs, psd_sqrt
from .state import BipartiteState, DensityOp, SchmidtDecomposition, reduced_density, schmidt


@dataclass(frozen=True, eq=False)
class AntilinearOp:
    """Antilinear map ``C^d_in -> C^d_out`` acting as ``matrix @ conj(psi)``."""

    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix, "antilinear matrix")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def d_in(self) -> int:
        return self.matrix.shape[1]

    @property
    def d_out(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, psi) -> np.ndarray:
        return apply(self, psi)

    def after(self, linear) -> "AntilinearOp":
        """``self o L`` for a linear map ``L``."""
        return AntilinearOp(self.matrix @ np.conj(np.asarray(linear, complex)))

    def before(self, linear) -> "AntilinearOp":
        """``L o self`` for a linear map ``L``."""
        return AntilinearOp(np.asarray(linear, complex) @ self.matrix)

    def compose(self, other: "AntilinearOp") -> np.ndarray:
        """``self o other``: a linear map, returned as its ordinary matrix."""
        return self.matrix @ np.conj(other.matrix)


def from_state(state: BipartiteState) -> AntilinearOp:
    """Representative determined by the partial scalar product over subsystem 1."""
    return AntilinearOp(state.coeffs.T)


def apply(op: AntilinearOp, psi) -> np.ndarray:
    psi = as_vector(psi, op.d_in, "psi")
    return op.matrix @ np.conj(psi)


def adjoint(op: AntilinearOp) -> AntilinearOp:
    return AntilinearOp(op.matrix.T)


def hs_norm_sq(op: AntilinearOp) -> float:
    """``tr(A^dagger A)``, i.e. the squared Frobenius norm of the matrix."""
    return float(np.sum(np.abs(op.matrix) ** 2))


@dataclass(frozen=True, eq=False)
class PolarData:
    """Factors of ``A = U rho1^{1/2} = rho2^{1/2} U Q1``.

    ``correlation`` is the antiunitary map from the support of rho_1 onto the
    support of rho_2 (zero on the null space of rho_1); ``correlation_inverse``
    is its inverse on the support of rho_2.
    """

    correlation: AntilinearOp
    correlation_inverse: AntilinearOp
    sqrt_rho1: np.ndarray
    sqrt_rho2: np.ndarray
    q1: np.ndarray
    q2: np.ndarray
    schmidt: SchmidtDecomposition

    @property
    def rank(self) -> int:
        return self.schmidt.rank


def correlation_operator(sd: SchmidtDecomposition) -> tuple[AntilinearOp, AntilinearOp]:
    """Antilinear maps ``u_k -> v_k`` and ``v_k -> u_k`` built from Schmidt pairs."""
    u, v = sd.left, sd.right
    return AntilinearOp(v @ u.T), AntilinearOp(u @ v.T)


def polar_factorize(op: AntilinearOp, state: BipartiteState,
                    tol: TolerancePolicy = DEFAULT_TOL) -> PolarData:
    if op.matrix.shape != (state.d2, state.d1):
        raise InconsistentInput(f"operator shape {op.matrix.shape} does not match state {state.d1}x{state.d2}")
    mismatch = max_abs(op.matrix - state.coeffs.T)
    if mismatch > 1e-10:
        raise InconsistentInput(f"operator differs from the state's representative by {mismatch:.3e}")
    sd = schmidt(state, tol)
    u_op, u_inv = correlation_operator(sd)
    rho1 = reduced_density(state, 1).matrix
    rho2 = reduced_density(state, 2).matrix
    return PolarData(
        correlation=u_op,
        correlation_inverse=u_inv,
        sqrt_rho1=psd_sqrt(rho1, tol),
        sqrt_rho2=psd_sqrt(rho2, tol),
        q1=column_projector(sd.left),
        q2=column_projector(sd.right),
        schmidt=sd,
    )


def factorization_residuals(op: AntilinearOp, polar: PolarData) -> dict[str, float]:
    """Hilbert-Schmidt residuals of both polar factorizations."""
    first = polar.correlation.after(polar.sqrt_rho1)
    second = polar.correlation.after(polar.q1).before(polar.sqrt_rho2)
    return {
        "polar_right": float(np.linalg.norm(op.matrix - first.matrix)),
        "polar_left": float(np.linalg.norm(op.matrix - second.matrix)),
    }


def check_similarity(polar: PolarData, rho1: DensityOp, rho2: DensityOp) -> float:
    """Max-norm residual of ``rho2 = U rho1 U^{-1} Q2``."""
    u = polar.correlation
    if rho1.dim != u.d_in or rho2.dim != u.d_out or polar.q2.shape != rho2.matrix.shape:
        raise DimensionMismatch("density operators do not match the factorization dimensions")
    transported = u.after(rho1.matrix).compose(polar.correlation_inverse) @ polar.q2
    return max_abs(rho2.matrix - transported)


def antiunitarity_residual(polar: PolarData) -> float:
    """Max deviation of ``<U x, U y>`` from ``<y, x>`` over a support basis.

    With the Schmidt vectors ``u_k`` as basis this is
    ``max |<U u_i, U u_j> - <u_j, u_i>|`` plus the failure of ``U`` to land in,
    and fill, the support of rho_2.
    """
    basis = polar.schmidt.left
    images = polar.correlation.matrix @ np.conj(basis)
    gram = images.conj().T @ images
    target = (basis.conj().T @ basis).conj()
    onto = max_abs(polar.q2 @ images - images)
    fills = max_abs(column_projector(images) - polar.q2) if images.size else 0.0
    return max(max_abs(gram - target), onto, fills)
