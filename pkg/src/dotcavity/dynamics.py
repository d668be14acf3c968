"""Open-system dynamics: master-equation right-hand side, time integration,
and expectation values along a trajectory.

The generator is

    drho/dt = -i[H, rho] + (kappa/2) D[a] + (gamma/2) (D[s1-] + D[s2-])
              + (Pc/2) D[a^dag] + (Px(t)/2) (D[s1+] + D[s2+])

with D[L] rho = 2 L rho L^dag - L^dag L rho - rho L^dag L, everything in
rad/ps.  Internally this is evaluated as A rho + rho A^dag + sum of jump
sandwiches, where A collects -iH and the anticommutator halves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _kernels, hilbert
from ._kernels import fallback
from .errors import ShapeError, SimulationError, StiffnessError, TruncationError
from .hilbert import HilbertSpace
from .model import PulseParams, SystemParams, hamiltonian

__all__ = [
    "DEFAULT_RTOL",
    "DEFAULT_ATOL",
    "TOP_FOCK_GUARD",
    "pump_profile",
    "lindblad_rhs",
    "validate_density_matrix",
    "Trajectory",
    "integrate",
    "ObservableTable",
    "observables",
]

DEFAULT_RTOL = 1e-8
DEFAULT_ATOL = 1e-10
TOP_FOCK_GUARD = 1e-5

TRACE_TOL = 1e-9
HERM_TOL = 1e-10
PSD_TOL = 1e-8

_MIN_STEP = 1e-10  # ps; below this the adaptive controller has stalled
_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


def pump_profile(pulse: PulseParams, t):
    """Instantaneous exciton pump rate Px(t) in rad/ps.

    Gaussian centred on ``pulse.center`` with width ``tau_p``; decays in
    both directions so the pump is negligible ten widths out.
    """
    t = np.asarray(t, dtype=float)
    arg = (t - pulse.center) / pulse.tau_p
    value = pulse.p0_angular * np.exp(-0.5 * arg * arg)
    return value if value.ndim else float(value)


def validate_density_matrix(rho: np.ndarray, *, trace_tol: float = TRACE_TOL,
                            herm_tol: float = HERM_TOL, psd_tol: float = PSD_TOL,
                            where: str = "density matrix") -> None:
    """Raise ValueError unless rho is Hermitian, unit-trace, and positive
    semidefinite within the given tolerances."""
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > herm_tol:
        raise ValueError(f"{where}: hermiticity defect {herm:.3e} exceeds {herm_tol:.1e}")
    tr = complex(np.trace(rho)).real
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"{where}: trace {tr!r} deviates from 1 beyond {trace_tol:.1e}")
    w_min = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min())
    if w_min < -psd_tol:
        raise ValueError(f"{where}: negative eigenvalue {w_min:.3e} below -{psd_tol:.1e}")


class LindbladPlan:
    """Precomputed operators for fast right-hand-side evaluation."""

    def __init__(self, space: HilbertSpace, params: SystemParams, force_python: bool = False):
        self.space = space
        self.params = params
        self.force_python = bool(force_python)

        a = hilbert.annihilation(space)
        ad = a.conj().T
        sm1 = hilbert.sigma_minus(space, 1)
        sm2 = hilbert.sigma_minus(space, 2)
        sp1 = sm1.conj().T
        sp2 = sm2.conj().T

        static = []
        for rate, op in ((params.kappa_angular, a),
                         (params.gamma_angular, sm1),
                         (params.gamma_angular, sm2),
                         (params.pc_angular, ad)):
            if rate > 0.0:
                static.append(math.sqrt(rate) * op)
        pump = [sp1, sp2]

        a_static = -1j * hamiltonian(space, params)
        for op in static:
            a_static -= 0.5 * (op.conj().T @ op)
        # pump anticommutator part is diagonal: s- s+ projects on the ground level
        self.pump_diag = -0.5 * np.real(np.diag(sm1 @ sp1 + sm2 @ sp2)).copy()
        self.a_static = np.ascontiguousarray(a_static)
        self.static_ops = static
        self.pump_ops = pump
        self.n_static = len(static)

        rows, cols, amps, offsets = [], [], [], [0]
        for op in static + pump:
            r, c = np.nonzero(op)
            rows.append(r)
            cols.append(c)
            amps.append(op[r, c])
            offsets.append(offsets[-1] + len(r))
        self.jump_row = np.concatenate(rows).astype(np.intc)
        self.jump_col = np.concatenate(cols).astype(np.intc)
        self.jump_amp = np.concatenate(amps).astype(complex)
        self.jump_offsets = np.asarray(offsets, dtype=np.intc)

        self._use_compiled = _kernels.COMPILED and not self.force_python

    def apply(self, rho: np.ndarray, px: float, out: np.ndarray | None = None) -> np.ndarray:
        if out is None:
            out = np.empty_like(rho)
        if self._use_compiled:
            _kernels.apply_rhs_sparse(out, rho, self.a_static, self.pump_diag,
                                      self.jump_row, self.jump_col, self.jump_amp,
                                      self.jump_offsets, self.n_static, float(px))
        else:
            fallback.apply_rhs(out, rho, self.a_static, self.pump_diag,
                               self.static_ops, self.pump_ops, float(px))
        return out


@lru_cache(maxsize=16)
def build_plan(space: HilbertSpace, params: SystemParams,
               force_python: bool = False) -> LindbladPlan:
    return LindbladPlan(space, params, force_python)


def lindblad_rhs(space: HilbertSpace, params: SystemParams, rho, t: float) -> np.ndarray:
    """drho/dt at time ``t`` for an arbitrary operator ``rho`` (rad/ps)."""
    rho = np.ascontiguousarray(rho, dtype=complex)
    if rho.shape != (space.dim, space.dim):
        raise ShapeError(f"state has shape {rho.shape}, expected ({space.dim}, {space.dim})")
    plan = build_plan(space, params)
    return plan.apply(rho, pump_profile(params.pulse, t))


@dataclass
class Trajectory:
    """Sampled open-system evolution.

    ``states`` has shape (n_samples, dim, dim); ``pump_values`` is the
    exciton pump rate Px(t) in rad/ps at each sample.
    """

    times: np.ndarray
    states: np.ndarray
    pump_values: np.ndarray
    herm_drift_max: float = 0.0
    n_steps: int = 0
    n_rhs_evals: int = 0

    def __post_init__(self):
        if not (len(self.times) == len(self.states) == len(self.pump_values)):
            raise ValueError("times, states and pump_values must have equal length")
        if len(self.times) > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("sample times must increase strictly")


# Dormand-Prince 5(4) pair; stage 7 equals the 5th-order solution (FSAL).
def _dopri5_step(rhs, t, y, h, k1):
    k2 = rhs(t + 0.2 * h, y + h * (0.2 * k1))
    k3 = rhs(t + 0.3 * h, y + h * (3 / 40 * k1 + 9 / 40 * k2))
    k4 = rhs(t + 0.8 * h, y + h * (44 / 45 * k1 - 56 / 15 * k2 + 32 / 9 * k3))
    k5 = rhs(t + 8 / 9 * h, y + h * (19372 / 6561 * k1 - 25360 / 2187 * k2
                                     + 64448 / 6561 * k3 - 212 / 729 * k4))
    k6 = rhs(t + h, y + h * (9017 / 3168 * k1 - 355 / 33 * k2 + 46732 / 5247 * k3
                             + 49 / 176 * k4 - 5103 / 18656 * k5))
    y_new = y + h * (35 / 384 * k1 + 500 / 1113 * k3 + 125 / 192 * k4
                     - 2187 / 6784 * k5 + 11 / 84 * k6)
    k7 = rhs(t + h, y_new)
    err = h * (71 / 57600 * k1 - 71 / 16695 * k3 + 71 / 1920 * k4
               - 17253 / 339200 * k5 + 22 / 525 * k6 - 1 / 40 * k7)
    return y_new, k7, err


def _rk4_step(rhs, t, y, h):
    k1 = rhs(t, y)
    k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = rhs(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _error_norm(err, y_old, y_new, rtol, atol):
    scale = atol + rtol * np.maximum(np.abs(y_old), np.abs(y_new))
    return float(np.sqrt(np.mean((np.abs(err) / scale) ** 2)))


def integrate(space: HilbertSpace, params: SystemParams, rho0, t_span,
              sample_dt: float, *, rtol: float = DEFAULT_RTOL,
              atol: float = DEFAULT_ATOL, fixed_step: float | None = None,
              truncation_guard: float | None = TOP_FOCK_GUARD,
              validate: bool = True, force_python_kernels: bool = False) -> Trajectory:
    """Integrate the master equation over ``t_span = (t_start, t_end)``.

    Samples are recorded on the uniform grid ``t_start + k * sample_dt``.
    By default an embedded 5(4) pair adapts the step to ``rtol``/``atol``;
    passing ``fixed_step`` switches to deterministic fixed-step 4th-order
    stepping (bit-for-bit reproducible across runs).  At each sample the
    state is symmetrized, optionally validated, and checked for population
    stuck in the top Fock level (``truncation_guard``; ``None`` disables).

    Raises ``StiffnessError`` when the adaptive step underflows and
    ``TruncationError`` when the guard trips.
    """
    t_start, t_end = float(t_span[0]), float(t_span[1])
    if t_end <= t_start:
        raise ValueError(f"t_span must increase, got {t_span}")
    if sample_dt <= 0.0:
        raise ValueError(f"sample_dt must be positive, got {sample_dt}")
    if fixed_step is not None and fixed_step <= 0.0:
        raise ValueError(f"fixed_step must be positive, got {fixed_step}")

    rho = np.array(rho0, dtype=complex, order="C")
    if rho.shape != (space.dim, space.dim):
        raise ShapeError(f"state has shape {rho.shape}, expected ({space.dim}, {space.dim})")
    validate_density_matrix(rho, where="initial state")

    plan = build_plan(space, params, force_python=force_python_kernels)
    pulse = params.pulse
    stats = {"steps": 0, "evals": 0}

    def rhs(t, y):
        stats["evals"] += 1
        return plan.apply(y, pump_profile(pulse, t))

    n_samples = int(math.floor((t_end - t_start) / sample_dt + 1e-9)) + 1
    times = t_start + sample_dt * np.arange(n_samples)
    states = np.empty((n_samples, space.dim, space.dim), dtype=complex)
    top_idx = np.array([space.index(e1, e2, space.n_max)
                        for e1 in (0, 1) for e2 in (0, 1)])

    herm_drift = 0.0

    def finalize(k, t, value):
        nonlocal herm_drift
        drift = float(np.max(np.abs(value - value.conj().T)))
        herm_drift = max(herm_drift, drift)
        sym = 0.5 * (value + value.conj().T)
        if validate:
            tr = complex(np.trace(sym)).real
            if abs(tr - 1.0) > TRACE_TOL:
                raise SimulationError(
                    f"trace drifted to {tr!r} at t={t:.4f} ps (tolerance {TRACE_TOL:.1e})")
            if drift > HERM_TOL:
                raise SimulationError(
                    f"hermiticity defect {drift:.3e} at t={t:.4f} ps exceeds {HERM_TOL:.1e}")
            w_min = float(np.linalg.eigvalsh(sym).min())
            if w_min < -PSD_TOL:
                raise SimulationError(
                    f"negative eigenvalue {w_min:.3e} at t={t:.4f} ps below -{PSD_TOL:.1e}")
        if truncation_guard is not None:
            top = float(np.sum(np.real(np.diagonal(sym))[top_idx]))
            if top > truncation_guard:
                raise TruncationError(
                    f"top Fock level n={space.n_max} holds population {top:.3e} "
                    f"at t={t:.4f} ps (guard {truncation_guard:.1e}); increase n_max")
        states[k] = sym
        return sym

    rho = finalize(0, t_start, rho)

    if fixed_step is not None:
        for k in range(1, n_samples):
            seg_start, seg_end = times[k - 1], times[k]
            n_sub = max(1, int(math.ceil((seg_end - seg_start) / fixed_step - 1e-12)))
            h = (seg_end - seg_start) / n_sub
            for m in range(n_sub):
                rho = _rk4_step(rhs, seg_start + m * h, rho, h)
                stats["steps"] += 1
            rho = finalize(k, seg_end, rho)
    else:
        t = t_start
        h = min(sample_dt, 1.0)
        k1 = rhs(t, rho)
        for k in range(1, n_samples):
            t_target = float(times[k])
            while t < t_target - 1e-12 * sample_dt:
                h_use = min(h, t_target - t)
                clipped = h_use < h * (1.0 - 1e-12)
                rejections = 0
                while True:
                    if h_use < _MIN_STEP:
                        raise StiffnessError(
                            f"step size underflowed at t={t:.6f} ps "
                            f"(||rho|| = {np.linalg.norm(rho):.3e}); "
                            "the generator appears too stiff for these tolerances",
                            t=t, rho_norm=float(np.linalg.norm(rho)))
                    y_new, k_last, err = _dopri5_step(rhs, t, rho, h_use, k1)
                    norm = _error_norm(err, rho, y_new, rtol, atol)
                    if norm <= 1.0:
                        break
                    rejections += 1
                    if rejections > 60:
                        raise StiffnessError(
                            f"step control failed to find an acceptable step at t={t:.6f} ps",
                            t=t, rho_norm=float(np.linalg.norm(rho)))
                    h_use *= max(_MIN_FACTOR, _SAFETY * norm ** -0.2)
                    h = h_use
                    clipped = False
                t += h_use
                rho, k1 = y_new, k_last
                stats["steps"] += 1
                factor = _MAX_FACTOR if norm == 0.0 else min(
                    _MAX_FACTOR, max(_MIN_FACTOR, _SAFETY * norm ** -0.2))
                if not clipped:
                    h = h_use * factor
            rho = finalize(k, t_target, rho)

    return Trajectory(times=times, states=states,
                      pump_values=np.asarray(pump_profile(pulse, times)),
                      herm_drift_max=herm_drift,
                      n_steps=stats["steps"], n_rhs_evals=stats["evals"])


@dataclass
class ObservableTable:
    """Scalar expectation values along a trajectory."""

    times: np.ndarray
    n_photon: np.ndarray
    pop_x1: np.ndarray
    pop_x2: np.ndarray
    top_fock: np.ndarray


def observables(space: HilbertSpace, trajectory: Trajectory) -> ObservableTable:
    """Photon number, exciton populations, and top-Fock occupation.

    All four operators are diagonal in the product basis, so only the
    state diagonals are touched.
    """
    if len(trajectory.times) == 0:
        raise ValueError("trajectory has no samples")
    labels = space.labels()
    n_vec = np.array([n for (_, _, n) in labels], dtype=float)
    x1_vec = np.array([e1 for (e1, _, _) in labels], dtype=float)
    x2_vec = np.array([e2 for (_, e2, _) in labels], dtype=float)
    top_vec = (n_vec == space.n_max).astype(float)

    diags = np.real(trajectory.states.diagonal(axis1=1, axis2=2))
    return ObservableTable(
        times=trajectory.times.copy(),
        n_photon=diags @ n_vec,
        pop_x1=diags @ x1_vec,
        pop_x2=diags @ x2_vec,
        top_fock=diags @ top_vec,
    )
