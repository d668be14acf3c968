"""Numerical kernels with a compiled fast path.

The Cython extension implements the Lindblad right-hand side and the
measurement-grid scan; the numpy fallback keeps the package functional
(and cross-checkable) without it.  Selection happens once at import.
Set ``DOTCAVITY_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

import numpy as np

from . import fallback

if os.environ.get("DOTCAVITY_PURE_PYTHON"):
    _compiled = None
else:
    try:
        from . import _core as _compiled
    except ImportError:
        _compiled = None

COMPILED = _compiled is not None


def backend() -> str:
    return "compiled" if COMPILED else "python"


def apply_rhs_sparse(out, rho, a_static, pump_diag, jump_row, jump_col,
                     jump_amp, jump_offsets, n_static, px):
    """Compiled right-hand side on the triplet jump representation.

    Only callable when ``COMPILED`` is true; the dense dispatch lives on
    the dynamics plan, which falls back to ``fallback.apply_rhs``.
    """
    if _compiled is None:
        raise RuntimeError("compiled kernels are not available")
    _compiled.apply_rhs(out, rho, a_static, pump_diag, jump_row, jump_col,
                        jump_amp, jump_offsets, n_static, px)
    return out


def conditional_entropy_grid(rho_ab, thetas, phis):
    rho_ab = np.ascontiguousarray(rho_ab, dtype=complex)
    thetas = np.ascontiguousarray(thetas, dtype=float)
    phis = np.ascontiguousarray(phis, dtype=float)
    if _compiled is not None:
        return _compiled.conditional_entropy_grid(rho_ab, thetas, phis)
    return fallback.conditional_entropy_grid(rho_ab, thetas, phis)


def conditional_entropy_point(rho_ab, theta, phi):
    if _compiled is not None:
        return _compiled.conditional_entropy_point(
            np.ascontiguousarray(rho_ab, dtype=complex), float(theta), float(phi))
    return fallback.conditional_entropy_point(rho_ab, theta, phi)
