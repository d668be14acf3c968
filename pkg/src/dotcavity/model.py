"""System parameters, the rotating-frame Hamiltonian, and its excitation
manifolds.

All user-facing rates are ordinary frequencies ``nu = rate / 2 pi`` in GHz.
Internally everything is angular, in rad/ps:  ``omega = 2 pi * nu * 1e-3``.
Times are picoseconds throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import hilbert
from .errors import DiagnosticsError, TruncationError
from .hilbert import HilbertSpace

ANGULAR_PER_GHZ = 2.0 * math.pi * 1e-3  # nu [GHz] -> omega [rad/ps]

GAUSSIAN_FWHM_FACTOR = 2.0 * math.sqrt(2.0 * math.log(2.0))

__all__ = [
    "ANGULAR_PER_GHZ",
    "GAUSSIAN_FWHM_FACTOR",
    "PulseParams",
    "SystemParams",
    "hamiltonian",
    "manifold_block",
    "SpectrumTable",
    "spectrum_sweep",
]


@dataclass(frozen=True)
class PulseParams:
    """Gaussian exciton-pump pulse.

    ``p0_over_2pi`` is the peak rate in GHz, ``tau_p`` the Gaussian width in
    ps.  ``t0`` is the pulse centre; ``None`` defaults it to ``3 * tau_p`` so
    the pulse switches on from a negligible tail.
    """

    p0_over_2pi: float = 0.0
    tau_p: float = 20.0
    t0: float | None = None

    def __post_init__(self):
        if self.tau_p <= 0.0:
            raise ValueError(f"tau_p must be positive, got {self.tau_p}")
        if self.p0_over_2pi < 0.0:
            raise ValueError(f"p0_over_2pi must be >= 0, got {self.p0_over_2pi}")

    @property
    def center(self) -> float:
        return 3.0 * self.tau_p if self.t0 is None else self.t0

    @property
    def fwhm(self) -> float:
        return GAUSSIAN_FWHM_FACTOR * self.tau_p

    @property
    def p0_angular(self) -> float:
        return self.p0_over_2pi * ANGULAR_PER_GHZ


@dataclass(frozen=True)
class SystemParams:
    """Physical rates of the two-dot/cavity system, as nu = rate/2pi in GHz.

    ``g``: dot-cavity coupling (identical for both dots), ``gamma``:
    spontaneous exciton decay, ``kappa``: cavity loss, ``forster``:
    excitation exchange between the dots, ``delta``: dot-cavity detuning
    (both dots), ``pc``: incoherent cavity pump.  ``cavity_freq_over_2pi``
    only documents the optical frequency for the quality factor.
    """

    g_over_2pi: float = 10.0
    gamma_over_2pi: float = 0.025
    kappa_over_2pi: float = 5.0
    forster_over_2pi: float = 0.0
    delta_over_2pi: float = 0.0
    pc_over_2pi: float = 0.0
    pulse: PulseParams = field(default_factory=PulseParams)
    n_max: int = 5
    cavity_freq_over_2pi: float = 170_000.0

    def __post_init__(self):
        for name in ("g_over_2pi", "gamma_over_2pi", "kappa_over_2pi", "pc_over_2pi"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        if self.n_max < 2:
            raise TruncationError(
                f"n_max must be at least 2, got {self.n_max}"
            )

    @property
    def g_angular(self) -> float:
        return self.g_over_2pi * ANGULAR_PER_GHZ

    @property
    def gamma_angular(self) -> float:
        return self.gamma_over_2pi * ANGULAR_PER_GHZ

    @property
    def kappa_angular(self) -> float:
        return self.kappa_over_2pi * ANGULAR_PER_GHZ

    @property
    def forster_angular(self) -> float:
        return self.forster_over_2pi * ANGULAR_PER_GHZ

    @property
    def delta_angular(self) -> float:
        return self.delta_over_2pi * ANGULAR_PER_GHZ

    @property
    def pc_angular(self) -> float:
        return self.pc_over_2pi * ANGULAR_PER_GHZ

    @property
    def strong_coupling(self) -> bool:
        return self.g_over_2pi > self.kappa_over_2pi and self.g_over_2pi > self.gamma_over_2pi

    @property
    def q_factor(self) -> float:
        """Cavity quality factor omega_c / (2 kappa)."""
        return self.cavity_freq_over_2pi / (2.0 * self.kappa_over_2pi)


def hamiltonian(space: HilbertSpace, params: SystemParams) -> np.ndarray:
    """Rotating-frame Hamiltonian in rad/ps.

    Detuning on each excited dot, Jaynes-Cummings exchange of each dot with
    the mode, and the direct excitation swap between the dots.  Conserves
    the total excitation number.
    """
    a = hilbert.annihilation(space)
    ad = a.conj().T
    sm1 = hilbert.sigma_minus(space, 1)
    sm2 = hilbert.sigma_minus(space, 2)
    sp1 = sm1.conj().T
    sp2 = sm2.conj().T

    h = params.delta_angular * (sp1 @ sm1 + sp2 @ sm2)
    h = h + params.g_angular * (ad @ sm1 + a @ sp1 + ad @ sm2 + a @ sp2)
    h = h + params.forster_angular * (sp1 @ sm2 + sm1 @ sp2)
    return h


def manifold_block(params: SystemParams, n: int) -> np.ndarray:
    """Hamiltonian block on the n-excitation manifold, in rad/ps.

    Basis order ``{|g,g,n>, |g,e,n-1>, |e,g,n-1>, |e,e,n-2>}``, energies
    measured relative to n quanta at the cavity frequency.  For ``n == 1``
    the unphysical fourth state is dropped and a 3x3 block is returned.
    """
    if n < 1:
        raise ValueError(f"manifold index must be >= 1, got {n}")
    g = params.g_angular
    gam = params.forster_angular
    d = params.delta_angular

    block = np.zeros((4, 4), dtype=complex)
    block[1, 1] = d
    block[2, 2] = d
    block[3, 3] = 2.0 * d
    block[0, 1] = block[1, 0] = g * math.sqrt(n)
    block[0, 2] = block[2, 0] = g * math.sqrt(n)
    block[1, 2] = block[2, 1] = gam
    block[1, 3] = block[3, 1] = g * math.sqrt(n - 1)
    block[2, 3] = block[3, 2] = g * math.sqrt(n - 1)
    if n == 1:
        return np.ascontiguousarray(block[:3, :3])
    return block


@dataclass(frozen=True)
class SpectrumTable:
    """Sorted manifold eigenvalues against detuning, both in GHz."""

    delta_ghz: np.ndarray
    eigenvalues_ghz: np.ndarray  # shape (len(delta_ghz), block size)


def spectrum_sweep(params: SystemParams, n: int, delta_range) -> SpectrumTable:
    """Eigenvalues of the n-excitation block for each detuning in
    ``delta_range`` (GHz), sorted ascending per row."""
    deltas = np.atleast_1d(np.asarray(delta_range, dtype=float))
    if deltas.size == 0:
        raise ValueError("delta_range must not be empty")
    rows = []
    for d in deltas:
        block = manifold_block(replace(params, delta_over_2pi=float(d)), n)
        try:
            w = np.linalg.eigvalsh(block)
        except np.linalg.LinAlgError as exc:
            raise DiagnosticsError(
                f"eigensolver failed on the n={n} block at delta={d} GHz: {exc}"
            ) from exc
        rows.append(np.sort(w) / ANGULAR_PER_GHZ)
    return SpectrumTable(deltas, np.vstack(rows))
