"""Pure-numpy implementations of the hot kernels.

These serve as the import-time fallback when the compiled extension is not
available, and as the reference the compiled path is tested against.
"""

from __future__ import annotations

import numpy as np

_P_FLOOR = 1e-12  # measurement outcomes below this probability contribute nothing
_LAM_FLOOR = 1e-300


def apply_rhs(out, rho, a_static, pump_diag, static_ops, pump_ops, px):
    """Lindblad right-hand side, dense formulation.

    ``out <- A rho + rho A^dag + sum_k L_k rho L_k^dag`` with
    ``A = a_static + px * diag(pump_diag)``.  Static jump operators carry
    their sqrt-rate prefactor; pump operators are bare and weighted by the
    instantaneous rate ``px``.
    """
    np.matmul(a_static, rho, out=out)
    out += rho @ a_static.conj().T
    if px != 0.0:
        out += px * (pump_diag[:, None] * rho + rho * pump_diag[None, :])
    for op in static_ops:
        out += op @ rho @ op.conj().T
    if px != 0.0:
        for op in pump_ops:
            out += px * (op @ rho @ op.conj().T)
    return out


def _outcome_entropy_terms(m00, m11, m01):
    """Contribution p * S(rho_post) for one measurement outcome, where the
    unnormalized 2x2 post-measurement block has real diagonal (m00, m11)
    and off-diagonal m01.  All inputs broadcast."""
    p = m00 + m11
    disc = np.sqrt((m00 - m11) ** 2 + 4.0 * np.abs(m01) ** 2)
    lam_hi = np.maximum(0.5 * (p + disc), 0.0)
    lam_lo = np.maximum(0.5 * (p - disc), 0.0)
    safe_p = np.where(p > _P_FLOOR, p, 1.0)

    def xlog(lam):
        ratio = np.where(lam > _LAM_FLOOR, lam / safe_p, 1.0)
        return lam * np.log2(np.where(ratio > _LAM_FLOOR, ratio, 1.0))

    term = -(xlog(lam_hi) + xlog(lam_lo))
    return np.where(p > _P_FLOOR, term, 0.0)


def conditional_entropy_grid(rho_ab, thetas, phis):
    """Average post-measurement entropy of dot 1 after projectively measuring
    dot 2 along the Bloch direction (theta, phi), on the full grid.

    Measurement vector: |m> = cos(theta/2)|g> + e^{i phi} sin(theta/2)|e>.
    Returns an array of shape (len(thetas), len(phis)).
    """
    r = np.asarray(rho_ab, dtype=complex).reshape(2, 2, 2, 2)
    thetas = np.asarray(thetas, dtype=float)
    phis = np.asarray(phis, dtype=float)

    c = np.cos(0.5 * thetas)[:, None]
    s = np.sin(0.5 * thetas)[:, None]
    phase = np.exp(1j * phis)[None, :]
    m = np.empty((len(thetas), len(phis), 2), dtype=complex)
    m[..., 0] = c * np.ones_like(phase)
    m[..., 1] = s * phase

    # m0[..., a, a'] = sum_{b, b'} conj(m_b) rho[(a,b),(a',b')] m_{b'}
    m0 = np.einsum("tpb,abcd,tpd->tpac", m.conj(), r, m, optimize=True)
    rho_a = np.einsum("abcb->ac", r)
    m1 = rho_a[None, None, :, :] - m0

    h = _outcome_entropy_terms(m0[..., 0, 0].real, m0[..., 1, 1].real, m0[..., 0, 1])
    h = h + _outcome_entropy_terms(m1[..., 0, 0].real, m1[..., 1, 1].real, m1[..., 0, 1])
    return h


def conditional_entropy_point(rho_ab, theta, phi):
    grid = conditional_entropy_grid(
        rho_ab, np.array([float(theta)]), np.array([float(phi)])
    )
    return float(grid[0, 0])
