"""Bipartite pure states, their reduced density operators and Schmidt data.

A state is stored as its coefficient matrix ``C`` in fixed product bases:
``Phi = sum_{k,n} C[k, n] |k>_1 (x) |n>_2``.  Row index belongs to
subsystem 1, column index to subsystem 2; the flattened state vector is
``C.reshape(-1)`` so that ``kron(X1, X2)`` acts on it directly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, NotNormalized, ParseError, ZeroState
from .numerics import DEFAULT_TOL, TolerancePolicy, as_matrix, numerical_rank, svd

NORM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class BipartiteState:
    coeffs: np.ndarray

    def __post_init__(self):
        c = as_matrix(self.coeffs, "coeffs")
        norm = np.linalg.norm(c)
        if abs(norm - 1.0) > NORM_TOL:
            raise NotNormalized(f"state norm is {norm!r}, expected 1")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def d1(self) -> int:
        return self.coeffs.shape[0]

    @property
    def d2(self) -> int:
        return self.coeffs.shape[1]

    @property
    def vector(self) -> np.ndarray:
        """The state as a length ``d1*d2`` vector (subsystem-1 index major)."""
        return self.coeffs.reshape(-1)


@dataclass(frozen=True, eq=False)
class DensityOp:
    matrix: np.ndarray
    side: int

    def __post_init__(self):
        if self.side not in (1, 2):
            raise ValueError(f"side must be 1 or 2, got {self.side!r}")
        m = as_matrix(self.matrix, "density matrix")
        if m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"density matrix must be square, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    """``C == left @ diag(coefficients) @ right.T``.

    ``left[:, k]`` is an eigenvector of rho_1 and ``right[:, k]`` the partner
    eigenvector of rho_2, both with eigenvalue ``coefficients[k]**2``.  Only
    the ``rank`` coefficients above the cutoff are kept.
    """

    coefficients: np.ndarray
    left: np.ndarray
    right: np.ndarray

    @property
    def rank(self) -> int:
        return int(self.coefficients.shape[0])

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.coefficients ** 2

    def reconstruct(self) -> np.ndarray:
        return (self.left * self.coefficients) @ self.right.T


def make_state(raw, normalize: bool = True) -> BipartiteState:
    c = as_matrix(raw, "raw")
    norm = float(np.linalg.norm(c))
    if normalize:
        if norm == 0.0:
            raise ZeroState("cannot normalize the zero vector")
        return BipartiteState(c / norm)
    if norm == 0.0:
        raise ZeroState("state has zero norm")
    if abs(norm - 1.0) > NORM_TOL:
        raise NotNormalized(f"state norm is {norm!r}, expected 1 (pass normalize to rescale)")
    return BipartiteState(c)


def product_state(chi, phi) -> BipartiteState:
    """``chi (x) phi`` for vectors of any nonzero norm (normalized)."""
    return make_state(np.outer(np.asarray(chi, complex), np.asarray(phi, complex)))


def reduced_density(state: BipartiteState, side: int) -> DensityOp:
    """Partial trace of ``|Phi><Phi|`` over the other subsystem."""
    c = state.coeffs
    if side == 1:
        m = c @ c.conj().T
    elif side == 2:
        m = c.T @ c.conj()
    else:
        raise ValueError(f"side must be 1 or 2, got {side!r}")
    return DensityOp(0.5 * (m + m.conj().T), side)


def partial_trace(op, d1: int, d2: int, keep: int) -> np.ndarray:
    """Partial trace of an operator on ``C^d1 (x) C^d2`` by explicit summation.

    Used as the reference path; it never touches coefficient matrices.
    """
    op = np.asarray(op, dtype=complex)
    if op.shape != (d1 * d2, d1 * d2):
        raise DimensionMismatch(f"operator shape {op.shape} does not match {d1}x{d2}")
    t = op.reshape(d1, d2, d1, d2)
    if keep == 1:
        out = np.zeros((d1, d1), dtype=complex)
        for n in range(d2):
            out += t[:, n, :, n]
    elif keep == 2:
        out = np.zeros((d2, d2), dtype=complex)
        for k in range(d1):
            out += t[k, :, k, :]
    else:
        raise ValueError(f"keep must be 1 or 2, got {keep!r}")
    return out


def schmidt(state: BipartiteState, tol: TolerancePolicy = DEFAULT_TOL) -> SchmidtDecomposition:
    left, s, right_h_conj = svd(state.coeffs)
    # C = L diag(s) R^dagger, so the subsystem-2 partners are conj(R)
    right = right_h_conj.conj()
    r = numerical_rank(s, tol)
    left, s, right = left[:, :r].copy(), s[:r].copy(), right[:, :r].copy()
    for k in range(r):
        j = int(np.argmax(np.abs(left[:, k])))
        phase = left[j, k] / abs(left[j, k])
        left[:, k] *= phase.conjugate()
        right[:, k] *= phase
    return SchmidtDecomposition(s, left, right)


# -- state files ---------------------------------------------------------------

def parse_state(text: str, source: str = "<string>") -> BipartiteState:
    """Parse the JSON state format: ``d1``, ``d2``, ``re``, ``im``, ``normalize``."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ParseError(f"{source}: top-level value must be an object")
    try:
        d1, d2 = data["d1"], data["d2"]
        re, im = data["re"], data["im"]
    except KeyError as exc:
        raise ParseError(f"{source}: missing field {exc.args[0]!r}") from None
    normalize = data.get("normalize", True)
    if not (isinstance(d1, int) and isinstance(d2, int)) or d1 < 1 or d2 < 1:
        raise ParseError(f"{source}: d1 and d2 must be positive integers")
    if not isinstance(normalize, bool):
        raise ParseError(f"{source}: normalize must be a boolean")
    try:
        re = np.asarray(re, dtype=float)
        im = np.asarray(im, dtype=float)
    except (TypeError, ValueError):
        raise ParseError(f"{source}: re/im must be arrays of numbers") from None
    for name, arr in (("re", re), ("im", im)):
        if arr.shape != (d1 * d2,):
            raise ParseError(f"{source}: {name} must hold d1*d2 = {d1 * d2} numbers, got shape {arr.shape}")
    return make_state((re + 1j * im).reshape(d1, d2), normalize=normalize)


def load_state(path) -> BipartiteState:
    path = Path(path)
    return parse_state(path.read_text(encoding="utf-8"), str(path))


def state_to_json(state: BipartiteState) -> str:
    c = state.coeffs.reshape(-1)
    data = {
        "d1": state.d1,
        "d2": state.d2,
        "re": [float(x) for x in c.real],
        "im": [float(x) for x in c.imag],
        "normalize": False,
    }
    return json.dumps(data, indent=2) + "\n"
