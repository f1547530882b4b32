"""Numpy implementations of the time-averaging kernels."""

import numpy as np

BLOCK = 1024


def cesaro_kernel(lam, T):
    """K[j, k] = (1/T) int_0^T exp(-i t (lam_j - lam_k)) dt."""
    theta = T * (lam[:, None] - lam[None, :])
    out = np.ones_like(theta, dtype=complex)
    nz = theta != 0.0
    th = theta[nz]
    out[nz] = np.sin(th) / th - 1j * (2.0 * np.sin(0.5 * th) ** 2 / th)
    return out


def cesaro_average(lam, coef, T):
    kern = cesaro_kernel(np.asarray(lam), T)
    return np.real(np.sum((coef @ kern.T) * coef.conj(), axis=1))


def trapezoid_blocks(lam, coef, T, samples):
    lam = np.asarray(lam)
    h = T / (samples - 1)
    nblocks = -(-samples // BLOCK)
    sums = np.zeros((nblocks, coef.shape[0]))
    worst = 0.0
    for b in range(nblocks):
        s = np.arange(b * BLOCK, min((b + 1) * BLOCK, samples))
        w = np.full(s.size, h / T)
        w[s == 0] = w[s == samples - 1] = 0.5 * h / T
        phases = np.exp(-1j * (s * h)[:, None] * lam[None, :])
        p = np.abs(phases @ coef.T) ** 2
        worst = max(worst, float(np.max(np.abs(p.sum(axis=1) - 1.0))))
        sums[b] = w @ p
    return sums, worst
