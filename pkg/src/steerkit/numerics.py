"""Dense complex linear algebra with an explicit tolerance policy.

All routines accept anything ``np.asarray`` understands and return fresh
``complex128`` / ``float64`` arrays; inputs are never modified.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonHermitian, NotPSD


@dataclass(frozen=True)
class TolerancePolicy:
    """Thresholds for rank, hermiticity and positivity decisions.

    ``rank_cutoff`` is relative to the largest eigenvalue or singular value
    of the matrix being examined; the other two are absolute.
    """

    rank_cutoff: float = 1e-12
    hermiticity_tol: float = 1e-10
    psd_clip: float = 1e-14

    def __post_init__(self):
        for name in ("rank_cutoff", "hermiticity_tol", "psd_clip"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be a finite nonnegative number, got {value!r}")


DEFAULT_TOL = TolerancePolicy()


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    m = np.array(a, dtype=complex)
    if m.ndim != 2 or m.size == 0:
        raise DimensionMismatch(f"{name} must be a nonempty 2-d array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def as_vector(v, dim: int | None = None, name: str = "vector") -> np.ndarray:
    x = np.array(v, dtype=complex)
    if x.ndim != 1:
        raise DimensionMismatch(f"{name} must be 1-d, got shape {x.shape}")
    if dim is not None and x.shape[0] != dim:
        raise DimensionMismatch(f"{name} has dimension {x.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} has non-finite entries")
    return x


def max_abs(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def _descending(values: np.ndarray) -> np.ndarray:
    # ties keep their original (ascending-index) order
    return np.argsort(-values, kind="stable")


def hermitian_eig(h, tol: TolerancePolicy = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues descending.

    Returns ``(w, V)`` with ``h == V @ diag(w) @ V.conj().T``.
    """
    h = as_matrix(h, "H")
    if h.shape[0] != h.shape[1]:
        raise DimensionMismatch(f"H must be square, got shape {h.shape}")
    if max_abs(h - h.conj().T) > tol.hermiticity_tol:
        raise NonHermitian(f"||H - H^dagger||_max = {max_abs(h - h.conj().T):.3e}")
    h = 0.5 * (h + h.conj().T)
    w, v = np.linalg.eigh(h)
    order = _descending(w)
    return w[order], v[:, order]


def svd(c) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD ``c == L @ diag(s) @ R.conj().T`` with ``s`` descending."""
    c = as_matrix(c, "C")
    left, s, right_h = np.linalg.svd(c, full_matrices=False)
    return left, s, right_h.conj().T


def numerical_rank(values, tol: TolerancePolicy = DEFAULT_TOL) -> int:
    """Count of entries above ``rank_cutoff`` times the largest entry."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return 0
    top = float(np.max(values))
    if top <= 0:
        return 0
    return int(np.count_nonzero(values > tol.rank_cutoff * top))


def psd_sqrt(rho, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in ``[-psd_clip, 0)`` are treated as round-off and clipped
    to zero; anything more negative raises :class:`NotPSD`.
    """
    w, v = hermitian_eig(rho, tol)
    if w.size and w[-1] < -tol.psd_clip:
        raise NotPSD(f"smallest eigenvalue {w[-1]:.3e} below -{tol.psd_clip:g}")
    root = np.sqrt(np.clip(w, 0.0, None))
    out = (v * root) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def column_projector(columns) -> np.ndarray:
    """Orthogonal projector onto the span of orthonormal columns."""
    b = np.asarray(columns, dtype=complex)
    return b @ b.conj().T
