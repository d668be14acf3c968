"""Truncated Hilbert space and elementary operators for two quantum dots
coupled to a single cavity mode.

The product state ``|e1, e2, n>`` (``e_i`` = 0 ground / 1 excited, ``n`` =
photon number) sits at index ``n + (n_max + 1) * (e2 + 2 * e1)``.  The
cavity index varies fastest, so tracing the cavity out is a sum over
contiguous blocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import TruncationError

__all__ = [
    "HilbertSpace",
    "make_space",
    "annihilation",
    "creation",
    "sigma_minus",
    "sigma_plus",
    "excitation_number",
]


@dataclass(frozen=True)
class HilbertSpace:
    """Two two-level dots and a Fock ladder truncated at ``n_max`` photons."""

    n_max: int

    @property
    def dim(self) -> int:
        return 4 * (self.n_max + 1)

    def index(self, e1: int, e2: int, n: int) -> int:
        """Basis index of ``|e1, e2, n>``."""
        if e1 not in (0, 1) or e2 not in (0, 1):
            raise ValueError(f"dot levels must be 0 or 1, got ({e1}, {e2})")
        if not 0 <= n <= self.n_max:
            raise ValueError(f"photon number {n} outside 0..{self.n_max}")
        return n + (self.n_max + 1) * (e2 + 2 * e1)

    def labels(self) -> list[tuple[int, int, int]]:
        """``(e1, e2, n)`` for each basis index, in index order."""
        return [
            (e1, e2, n)
            for e1 in (0, 1)
            for e2 in (0, 1)
            for n in range(self.n_max + 1)
        ]

    def basis_state(self, e1: int, e2: int, n: int) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=complex)
        vec[self.index(e1, e2, n)] = 1.0
        return vec


def make_space(n_max: int) -> HilbertSpace:
    """Build the composite space.

    ``n_max >= 2`` is required so that the second excitation manifold
    (which reaches ``|g, g, 2>``) is representable.
    """
    if n_max < 2:
        raise TruncationError(
            f"n_max must be at least 2 so the two-excitation states exist, got {n_max}"
        )
    return HilbertSpace(int(n_max))


def _embed(dot1: np.ndarray, dot2: np.ndarray, cavity: np.ndarray) -> np.ndarray:
    return reduce(np.kron, (dot1, dot2, cavity)).astype(complex)


_LOWER = np.array([[0.0, 1.0], [0.0, 0.0]])  # |g><e| on one dot
_EYE2 = np.eye(2)


def annihilation(space: HilbertSpace) -> np.ndarray:
    """Photon destruction operator, ``a|e1,e2,n> = sqrt(n)|e1,e2,n-1>``."""
    k = space.n_max + 1
    sub = np.diag(np.sqrt(np.arange(1.0, k)), k=1)
    return _embed(_EYE2, _EYE2, sub)


def creation(space: HilbertSpace) -> np.ndarray:
    return annihilation(space).conj().T


def sigma_minus(space: HilbertSpace, which: int) -> np.ndarray:
    """Lowering operator of dot 1 or dot 2."""
    k = space.n_max + 1
    if which == 1:
        return _embed(_LOWER, _EYE2, np.eye(k))
    if which == 2:
        return _embed(_EYE2, _LOWER, np.eye(k))
    raise ValueError(f"dot index must be 1 or 2, got {which}")


def sigma_plus(space: HilbertSpace, which: int) -> np.ndarray:
    return sigma_minus(space, which).conj().T


def excitation_number(space: HilbertSpace) -> np.ndarray:
    """Total excitation count, photons plus excited dots (diagonal)."""
    diag = [n + e1 + e2 for (e1, e2, n) in space.labels()]
    return np.diag(np.asarray(diag, dtype=complex))
