"""Polynomial-phase waveforms, measurement noise and angle utilities."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

__all__ = [
    "FrequencyTriplet",
    "NoiseSpec",
    "PhaseSignalSpec",
    "UndefinedAngleError",
    "conjugate_product_angles",
    "snr_to_noise_variance",
    "synthesize",
    "triplet_to_spec",
    "wrap",
]

NOISE_MODES = ("complex-gaussian", "complex-uniform", "angle-gaussian")


class UndefinedAngleError(ValueError):
    """Raised when the angle of a zero-magnitude complex sample is requested."""


class FrequencyTriplet(NamedTuple):
    """Instantaneous frequency (cycles/sample) at the start, middle and end of a block."""

    f0: float
    f1: float
    f2: float


@dataclass(frozen=True)
class PhaseSignalSpec:
    """Complex exponential ``A exp(i theta[n])`` with polynomial phase.

    The phase is ``theta[n] = sum_k theta[k] n**k / k!`` so that ``theta[k]``
    is the k-th time derivative of the phase at ``n = 0``.

    Parameters
    ----------
    theta : sequence of float
        Phase coefficients, radians per sample**k. Between one and four
        entries (degree 0 to 3).
    amplitude : float
        Signal magnitude ``A``.
    n_samples : int
        Block length ``N``.
    """

    theta: tuple[float, ...]
    amplitude: float = 1.0
    n_samples: int = 1000

    def __post_init__(self):
        theta = tuple(float(t) for t in self.theta)
        if not 1 <= len(theta) <= 4:
            raise ValueError(f"theta needs 1 to 4 coefficients, got {len(theta)}")
        if not self.amplitude > 0:
            raise ValueError("amplitude must be positive")
        if self.n_samples < 1:
            raise ValueError("n_samples must be at least 1")
        object.__setattr__(self, "theta", theta)

    @property
    def degree(self) -> int:
        return len(self.theta) - 1

    def with_offset(self, theta0: float) -> "PhaseSignalSpec":
        return replace(self, theta=(float(theta0),) + self.theta[1:])

    def derivative(self, t, order: int = 0):
        """Evaluate the ``order``-th time derivative of the phase at (real) times ``t``."""
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for k in range(len(self.theta) - 1, order - 1, -1):
            # Horner in t over theta[k] t**(k-order) / (k-order)!
            out = out * t / (k - order + 1) + self.theta[k]
        return out

    def phase(self, t):
        return self.derivative(t, 0)

    def frequency(self, t):
        """Instantaneous frequency in radians per sample."""
        return self.derivative(t, 1)


@dataclass(frozen=True)
class NoiseSpec:
    """Additive measurement noise.

    ``complex-gaussian`` and ``complex-uniform`` perturb the real and
    imaginary parts independently, each with zero mean and variance
    ``variance``. ``angle-gaussian`` adds real noise of variance
    ``variance / A**2`` to the phase, keeping the magnitude at ``A``.
    """

    mode: str = "complex-gaussian"
    variance: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.mode not in NOISE_MODES:
            raise ValueError(f"unknown noise mode {self.mode!r}; expected one of {NOISE_MODES}")
        if not self.variance >= 0:
            raise ValueError("noise variance must be non-negative")


def snr_to_noise_variance(snr_db: float, amplitude: float = 1.0) -> float:
    """Per-component noise variance giving ``SNR = A**2 / variance``."""
    if math.isinf(snr_db) and snr_db > 0:
        return 0.0
    return amplitude**2 / 10.0 ** (snr_db / 10.0)


def triplet_to_spec(triplet, n_samples: int) -> PhaseSignalSpec:
    """Phase polynomial whose frequency passes through a frequency triplet.

    The instantaneous frequency ``omega(n) = theta1 + theta2 n + theta3 n**2 / 2``
    is fitted through ``2 pi f0``, ``2 pi f1`` and ``2 pi f2`` at
    ``n = 0, (N-1)/2, N-1``. The returned degree is the smallest that fits
    (1 for a constant, 2 for a linear sweep, 3 otherwise) and ``theta0 = 0``.
    """
    if n_samples < 3:
        raise ValueError("n_samples must be at least 3")
    f0, f1, f2 = (float(f) for f in triplet)
    half = (n_samples - 1) / 2.0
    w0, w1, w2 = (2 * math.pi * f for f in (f0, f1, f2))

    curvature = w2 - 2.0 * w1 + w0
    scale = max(abs(w0), abs(w1), abs(w2), 1e-300)
    if f0 == f1 == f2:
        return PhaseSignalSpec((0.0, w0), n_samples=n_samples)
    if abs(curvature) <= 1e-12 * scale:
        return PhaseSignalSpec((0.0, w0, (w2 - w0) / (2.0 * half)), n_samples=n_samples)
    c2 = curvature / (2.0 * half**2)
    c1 = (w1 - w0) / half - c2 * half
    return PhaseSignalSpec((0.0, w0, c1, 2.0 * c2), n_samples=n_samples)


def synthesize(spec: PhaseSignalSpec, noise: NoiseSpec | None = None, rng=None) -> np.ndarray:
    """Sample ``x[n] = A exp(i theta[n]) + noise`` for ``n = 0 .. N-1``.

    ``rng`` overrides the generator seeded from ``noise.seed``.
    """
    n = np.arange(spec.n_samples, dtype=float)
    theta = spec.phase(n)
    amp = spec.amplitude
    if noise is None or noise.variance == 0.0:
        return amp * np.exp(1j * theta)

    if rng is None:
        rng = np.random.default_rng(noise.seed)
    sigma = math.sqrt(noise.variance)
    if noise.mode == "angle-gaussian":
        return amp * np.exp(1j * (theta + rng.standard_normal(theta.shape) * sigma / amp))
    if noise.mode == "complex-gaussian":
        eps = rng.standard_normal((2,) + theta.shape)
    else:
        eps = rng.uniform(-math.sqrt(3.0), math.sqrt(3.0), size=(2,) + theta.shape)
    return amp * np.exp(1j * theta) + sigma * (eps[0] + 1j * eps[1])


def wrap(angle):
    """Map angles onto the half-open interval (-pi, pi].

    Values already inside the interval are returned untouched; ``-pi`` maps
    to ``+pi``.
    """
    a = np.asarray(angle, dtype=float)
    out = np.where((a > -math.pi) & (a <= math.pi), a, math.pi - np.mod(math.pi - a, 2.0 * math.pi))
    # np.mod can round up to 2*pi for tiny negative arguments
    out = np.where(out <= -math.pi, out + 2.0 * math.pi, out)
    return out if out.ndim else float(out)


def conjugate_product_angles(x) -> np.ndarray:
    """Raw frequency measurements ``arg(x[n] x*[n-1])`` for ``n = 1 .. N-1``.

    Operates along the last axis; the output is one sample shorter.
    """
    x = np.asarray(x)
    if x.shape[-1] < 2:
        raise ValueError("need at least two samples")
    if np.any(x == 0):
        raise UndefinedAngleError("angle of a zero-magnitude sample is undefined")
    return np.angle(x[..., 1:] * np.conj(x[..., :-1]))
