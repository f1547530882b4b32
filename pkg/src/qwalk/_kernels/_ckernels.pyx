# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled time-averaging kernels; see _pykernels for the reference version.

Complex products are spelled out on real/imaginary parts so the C compiler
does not route them through its NaN-aware complex multiply helper.
"""

import numpy as np

from libc.math cimport sin, cos, fabs

BLOCK = 1024


def cesaro_average(double[::1] lam, double complex[:, ::1] coef, double T):
    cdef Py_ssize_t n = lam.shape[0], N = coef.shape[0]
    cdef Py_ssize_t x, j, k
    cdef double acc, theta, s, ar, ai, br, bi, pr, pi_
    kr_arr = np.empty((n, n))
    ki_arr = np.empty((n, n))
    cdef double[:, ::1] kr = kr_arr
    cdef double[:, ::1] ki = ki_arr
    # kernel (1 - exp(-i theta)) / (i theta), upper triangle only
    for j in range(n):
        for k in range(j + 1, n):
            theta = T * (lam[j] - lam[k])
            if theta == 0.0:
                kr[j, k] = 1.0
                ki[j, k] = 0.0
            else:
                s = sin(0.5 * theta)
                kr[j, k] = sin(theta) / theta
                ki[j, k] = -2.0 * s * s / theta
    cr_arr = np.ascontiguousarray(np.real(coef))
    ci_arr = np.ascontiguousarray(np.imag(coef))
    cdef double[:, ::1] cr = cr_arr
    cdef double[:, ::1] ci = ci_arr
    out = np.empty(N, dtype=np.float64)
    cdef double[::1] o = out
    for x in range(N):
        acc = 0.0
        for j in range(n):
            ar = cr[x, j]
            ai = ci[x, j]
            acc += ar * ar + ai * ai
            for k in range(j + 1, n):
                # c_j * conj(c_k)
                br = cr[x, k]
                bi = ci[x, k]
                pr = ar * br + ai * bi
                pi_ = ai * br - ar * bi
                acc += 2.0 * (pr * kr[j, k] - pi_ * ki[j, k])
        o[x] = acc
    return out


def trapezoid_blocks(double[::1] lam, double complex[:, ::1] coef, double T, Py_ssize_t samples):
    """Per-block trapezoid sums of p_x(t) / T and the worst |sum_x p_x(t) - 1|.

    Phases advance by a fixed rotation inside a block and are recomputed
    exactly at each block start.
    """
    cdef Py_ssize_t n = lam.shape[0], N = coef.shape[0]
    cdef Py_ssize_t nblocks = (samples + BLOCK - 1) // BLOCK
    cdef double h = T / (samples - 1)
    cdef Py_ssize_t b, s, s0, s1, x, j
    cdef double w, p, norm, worst = 0.0, t0, re, im, qr, qi, ar, ai
    sums_arr = np.zeros((nblocks, N), dtype=np.float64)
    cdef double[:, ::1] sums = sums_arr
    # transposed so the innermost loop runs over vertices with unit stride
    cr_arr = np.ascontiguousarray(np.real(coef).T)
    ci_arr = np.ascontiguousarray(np.imag(coef).T)
    cdef double[:, ::1] cr = cr_arr
    cdef double[:, ::1] ci = ci_arr
    amp_arr = np.empty((2, N))
    cdef double[:, ::1] amp = amp_arr
    buf = np.empty((4, n))
    cdef double[:, ::1] ph = buf  # rows: phase re, phase im, rotation re, rotation im
    for j in range(n):
        ph[2, j] = cos(h * lam[j])
        ph[3, j] = -sin(h * lam[j])
    for b in range(nblocks):
        s0 = b * BLOCK
        s1 = min(s0 + BLOCK, samples)
        t0 = s0 * h
        for j in range(n):
            ph[0, j] = cos(t0 * lam[j])
            ph[1, j] = -sin(t0 * lam[j])
        for s in range(s0, s1):
            w = h / T
            if s == 0 or s == samples - 1:
                w = 0.5 * h / T
            for x in range(N):
                amp[0, x] = 0.0
                amp[1, x] = 0.0
            for j in range(n):
                re = ph[0, j]
                im = ph[1, j]
                for x in range(N):
                    amp[0, x] += cr[j, x] * re - ci[j, x] * im
                    amp[1, x] += cr[j, x] * im + ci[j, x] * re
            norm = 0.0
            for x in range(N):
                p = amp[0, x] * amp[0, x] + amp[1, x] * amp[1, x]
                norm += p
                sums[b, x] += w * p
            if fabs(norm - 1.0) > worst:
                worst = fabs(norm - 1.0)
            for j in range(n):
                re = ph[0, j]
                im = ph[1, j]
                qr = ph[2, j]
                qi = ph[3, j]
                ph[0, j] = re * qr - im * qi
                ph[1, j] = re * qi + im * qr
    return sums_arr, worst
