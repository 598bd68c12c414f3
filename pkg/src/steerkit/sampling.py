"""Seeded random states, vectors, bases and projectors."""
from __future__ import annotations

import numpy as np

from .state import BipartiteState, make_state


def _ginibre(rng: np.random.Generator, *shape) -> np.ndarray:
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def random_unit(rng: np.random.Generator, d: int) -> np.ndarray:
    v = _ginibre(rng, d)
    return v / np.linalg.norm(v)


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    """Haar unitary via QR with the diagonal phases of R removed."""
    q, r = np.linalg.qr(_ginibre(rng, d, d))
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def random_projector(rng: np.random.Generator, d: int, rank: int | None = None) -> np.ndarray:
    if rank is None:
        rank = int(rng.integers(1, d + 1))
    cols = random_unitary(rng, d)[:, :rank]
    return cols @ cols.conj().T


def random_state(rng: np.random.Generator, d1: int, d2: int, rank: int | None = None) -> BipartiteState:
    """Random state; with ``rank`` the Schmidt rank is forced to that value."""
    if rank is None:
        return make_state(_ginibre(rng, d1, d2))
    if not 1 <= rank <= min(d1, d2):
        raise ValueError(f"rank must lie in [1, {min(d1, d2)}], got {rank}")
    return make_state(_ginibre(rng, d1, rank) @ _ginibre(rng, rank, d2))
