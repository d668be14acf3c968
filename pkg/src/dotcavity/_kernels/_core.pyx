# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: the Lindblad right-hand side and the measurement-grid
scan behind the classical-correlation optimizer.

Both mirror the numpy reference in ``fallback.py`` and are cross-checked
against it in the test suite.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, log, sin, sqrt

cnp.import_array()

cdef double INV_LN2 = 1.4426950408889634
cdef double P_FLOOR = 1e-12


def apply_rhs(cnp.complex128_t[:, ::1] out,
              cnp.complex128_t[:, ::1] rho,
              cnp.complex128_t[:, ::1] a_static,
              double[::1] pump_diag,
              int[::1] jump_row,
              int[::1] jump_col,
              cnp.complex128_t[::1] jump_amp,
              int[::1] jump_offsets,
              int n_static,
              double px):
    """out <- A rho + rho A^dag + sum_k w_k L_k rho L_k^dag.

    A = a_static + px * diag(pump_diag).  Jump operators are stored as
    flat (row, col, amplitude) triplets, one contiguous slice per operator
    delimited by ``jump_offsets``; the first ``n_static`` operators have
    weight 1 (amplitudes carry sqrt(rate)), the rest are weighted by px.
    """
    cdef Py_ssize_t n = rho.shape[0]
    cdef Py_ssize_t n_ops = jump_offsets.shape[0] - 1
    cdef Py_ssize_t i, j, k, q, r, s, lo, hi
    cdef double complex acc
    cdef double w

    for i in range(n):
        for j in range(n):
            out[i, j] = 0.0

    # out += a_static @ rho
    for i in range(n):
        for k in range(n):
            acc = a_static[i, k]
            if acc != 0.0:
                for j in range(n):
                    out[i, j] = out[i, j] + acc * rho[k, j]

    # out += rho @ a_static^dag
    for j in range(n):
        for k in range(n):
            acc = a_static[j, k].conjugate()
            if acc != 0.0:
                for i in range(n):
                    out[i, j] = out[i, j] + rho[i, k] * acc

    if px != 0.0:
        for i in range(n):
            for j in range(n):
                out[i, j] = out[i, j] + px * (pump_diag[i] + pump_diag[j]) * rho[i, j]

    for q in range(n_ops):
        if q < n_static:
            w = 1.0
        elif px != 0.0:
            w = px
        else:
            continue
        lo = jump_offsets[q]
        hi = jump_offsets[q + 1]
        for r in range(lo, hi):
            acc = w * jump_amp[r]
            for s in range(lo, hi):
                out[jump_row[r], jump_row[s]] = out[jump_row[r], jump_row[s]] + \
                    acc * jump_amp[s].conjugate() * rho[jump_col[r], jump_col[s]]
    return None


cdef inline double _outcome_term(double m00, double m11, double complex m01) nogil:
    # p * S(rho_post) for one unnormalized 2x2 Hermitian outcome block.
    cdef double p = m00 + m11
    cdef double disc, lam_hi, lam_lo, h
    if p <= P_FLOOR:
        return 0.0
    disc = sqrt((m00 - m11) * (m00 - m11) +
                4.0 * (m01.real * m01.real + m01.imag * m01.imag))
    lam_hi = 0.5 * (p + disc)
    lam_lo = 0.5 * (p - disc)
    if lam_lo < 0.0:
        lam_lo = 0.0
    h = 0.0
    if lam_hi > 0.0:
        h -= lam_hi * log(lam_hi / p) * INV_LN2
    if lam_lo > 0.0:
        h -= lam_lo * log(lam_lo / p) * INV_LN2
    return h


cdef double _cond_entropy(cnp.complex128_t[:, ::1] rho, double theta, double phi) nogil:
    # Blocks B^{aa'}[b,b'] = rho[2a+b, 2a'+b']; measurement on dot 2 (index b).
    cdef double c = cos(0.5 * theta)
    cdef double s = sin(0.5 * theta)
    cdef double complex phase
    cdef double complex e_ph = cos(phi) + 1j * sin(phi)
    cdef double m0_00, m0_11, m1_00, m1_11
    cdef double complex m0_01, m1_01
    cdef double ra00, ra11
    cdef double complex ra01

    # diagonal-a blocks are Hermitian: m^dag B m is real
    m0_00 = c * c * rho[0, 0].real + s * s * rho[1, 1].real + \
        2.0 * c * s * (rho[0, 1] * e_ph).real
    m0_11 = c * c * rho[2, 2].real + s * s * rho[3, 3].real + \
        2.0 * c * s * (rho[2, 3] * e_ph).real
    m0_01 = c * c * rho[0, 2] + c * s * e_ph * rho[0, 3] + \
        c * s * e_ph.conjugate() * rho[1, 2] + s * s * rho[1, 3]

    ra00 = rho[0, 0].real + rho[1, 1].real
    ra11 = rho[2, 2].real + rho[3, 3].real
    ra01 = rho[0, 2] + rho[1, 3]

    m1_00 = ra00 - m0_00
    m1_11 = ra11 - m0_11
    m1_01 = ra01 - m0_01

    return _outcome_term(m0_00, m0_11, m0_01) + _outcome_term(m1_00, m1_11, m1_01)


def conditional_entropy_grid(cnp.complex128_t[:, ::1] rho_ab,
                             double[::1] thetas,
                             double[::1] phis):
    """Average post-measurement entropy of dot 1 over the (theta, phi) grid."""
    cdef Py_ssize_t nt = thetas.shape[0]
    cdef Py_ssize_t np_ = phis.shape[0]
    out_arr = np.empty((nt, np_), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(nt):
            for j in range(np_):
                out[i, j] = _cond_entropy(rho_ab, thetas[i], phis[j])
    return out_arr


def conditional_entropy_point(cnp.complex128_t[:, ::1] rho_ab, double theta, double phi):
    return _cond_entropy(rho_ab, theta, phi)
