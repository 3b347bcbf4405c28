"""Differentiator chains and the noise colouring they introduce.

A chain of ``K0`` two-point backward differences turns white angle noise into
coloured noise with PSD ``|1 - exp(-i w)|**(2 K0)``. Everything here is
computed from exact integer binomials.
"""

from __future__ import annotations

from math import comb

import numpy as np
from scipy.linalg import toeplitz

__all__ = [
    "coloured_covariance",
    "hpf_impulse",
    "noise_psd",
    "raw_autocorrelation",
]


def hpf_impulse(K0: int) -> np.ndarray:
    """Impulse response of ``K0`` cascaded differentiators ``[1, -1]``."""
    if K0 < 0:
        raise ValueError("K0 must be non-negative")
    return np.array([(-1) ** m * comb(K0, m) for m in range(K0 + 1)], dtype=float)


def raw_autocorrelation(K0: int) -> np.ndarray:
    """Unnormalised autocorrelation of :func:`hpf_impulse` at lags ``0 .. K0``.

    Lag ``l`` equals ``(-1)**l * C(2 K0, K0 + l)`` (Vandermonde's identity).
    """
    if K0 < 0:
        raise ValueError("K0 must be non-negative")
    return np.array([(-1) ** l * comb(2 * K0, K0 + l) for l in range(K0 + 1)], dtype=float)


def coloured_covariance(K0: int, M: int, normalized: bool = True) -> np.ndarray:
    """M x M banded Toeplitz covariance of the differentiated noise.

    With ``normalized`` (the default) the diagonal is one; otherwise the
    matrix is the Gram matrix of shifted copies of the differentiator
    impulse response.
    """
    if M < 1:
        raise ValueError("M must be at least 1")
    r = raw_autocorrelation(K0)
    if normalized:
        r = r / r[0]
    col = np.zeros(M)
    n = min(M, K0 + 1)
    col[:n] = r[:n]
    return toeplitz(col)


def noise_psd(K0: int, omega):
    """``|H_HPF(exp(i omega))|**2 = (2 - 2 cos omega)**K0``."""
    if K0 < 0:
        raise ValueError("K0 must be non-negative")
    return (2.0 - 2.0 * np.cos(omega)) ** K0
