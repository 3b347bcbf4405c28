"""Frequency-domain and noise-gain analysis of designed filters."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import freqz

from .colouring import hpf_impulse, noise_psd

__all__ = [
    "ResponseReport",
    "dc_group_delay",
    "default_cutoff",
    "expected_variance",
    "freq_response",
    "group_delay",
    "impulse_response",
    "noise_gain_table",
    "noise_gains",
    "noise_gains_frequency",
    "phase_linearity_deviation",
    "response_report",
]

CSV_COLUMNS = ("f", "re", "im", "mag2", "phase_deg", "dev_deg", "mag2_db", "group_delay")


def _ba(filt):
    return np.asarray(filt.b, dtype=float), np.asarray(filt.a, dtype=float)


def impulse_response(filt) -> np.ndarray:
    """Impulse response, truncated by the design-time tail bound for recursive filters."""
    return filt.impulse_response()


def freq_response(filt, omega) -> np.ndarray:
    """``B(exp(i w)) / A(exp(i w))`` at angular frequencies ``omega`` (radians/sample)."""
    b, a = _ba(filt)
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    _, H = freqz(b, a, worN=omega)
    return H


def dc_group_delay(filt) -> float:
    """Group delay at dc from the coefficient moments of ``B`` and ``A``."""
    b, a = _ba(filt)
    kb = np.arange(b.size)
    ka = np.arange(a.size)
    return float(kb @ b / b.sum() - ka @ a / a.sum())


def group_delay(filt, omega) -> np.ndarray:
    """``-d arg H / d w``; infinite or nan on exact zeros of ``B``."""
    b, a = _ba(filt)
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    zb = np.exp(-1j * np.outer(omega, np.arange(b.size)))
    za = np.exp(-1j * np.outer(omega, np.arange(a.size)))
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.real(zb @ (np.arange(b.size) * b) / (zb @ b)) - np.real(za @ (np.arange(a.size) * a) / (za @ a))


def noise_gains(filt, K0_tilde: int = 0) -> tuple[float, float]:
    """Return ``(v_LPF, v_BPF)``.

    ``v_BPF`` is the power gain of the filter preceded by ``K0_tilde``
    differentiators, i.e. the variance of the output for unit-variance white
    noise entering ahead of the differentiators.
    """
    h = impulse_response(filt)
    h_bpf = np.convolve(h, hpf_impulse(K0_tilde))
    return float(h @ h), float(h_bpf @ h_bpf)


def noise_gain_table(filt, K0_values=(0, 1, 2, 3)) -> dict[int, float]:
    h = impulse_response(filt)
    out = {}
    for k in K0_values:
        g = np.convolve(h, hpf_impulse(k))
        out[int(k)] = float(g @ g)
    return out


def noise_gains_frequency(filt, K0_tilde: int = 0, n_grid: int = 2**16) -> tuple[float, float]:
    """Frequency-domain cross-check of :func:`noise_gains`.

    Trapezoid rule over one period on a uniform grid, which for a periodic
    integrand is the plain mean of the samples.
    """
    omega = -math.pi + 2.0 * math.pi * np.arange(n_grid) / n_grid
    mag2 = np.abs(freq_response(filt, omega)) ** 2
    return float(mag2.mean()), float((mag2 * noise_psd(K0_tilde, omega)).mean())


def expected_variance(v_bpf: float, snr_db: float) -> float:
    """Analytical error variance ``v_BPF / SNR``."""
    if not math.isfinite(snr_db):
        raise ValueError("snr_db must be finite")
    return float(v_bpf) / 10.0 ** (snr_db / 10.0)


def default_cutoff(filt) -> float:
    """Nominal cut-off used to bound the passband: ``f_c`` for Bessel bases, else ``1 / length``."""
    f_c = getattr(filt, "f_c", None)
    if f_c:
        return float(f_c)
    return 1.0 / (filt.M if filt.kind == "fir" else filt.K_phi)


def phase_linearity_deviation(filt, q=None, f_c=None, n_points: int = 256):
    """Deviation of the passband phase from a pure delay of ``q`` samples, in degrees.

    Evaluates ``arg(H(exp(i w)) exp(i q w))`` on ``n_points`` frequencies
    spanning ``[0, 0.95 f_c]``. Returns ``(f, deviation_deg, max_abs_deg)``.
    """
    q = filt.q if q is None else float(q)
    f_c = default_cutoff(filt) if f_c is None else float(f_c)
    f = np.linspace(0.0, 0.95 * f_c, n_points)
    w = 2.0 * math.pi * f
    dev = np.degrees(np.angle(freq_response(filt, w) * np.exp(1j * q * w)))
    return f, dev, float(np.max(np.abs(dev)))


@dataclass
class ResponseReport:
    """Tabulated response of one filter plus scalar summaries.

    ``dev_deg`` is nan outside the passband sub-grid ``[0, 0.95 f_c]``.
    """

    f: np.ndarray
    H: np.ndarray
    dev_deg: np.ndarray
    group_delay: np.ndarray
    q: float
    f_c: float
    dc_group_delay: float
    v_LPF: float
    v_BPF: dict = field(default_factory=dict)
    max_deviation_deg: float = 0.0

    @property
    def mag2(self) -> np.ndarray:
        return np.abs(self.H) ** 2

    @property
    def phase_deg(self) -> np.ndarray:
        return np.degrees(np.angle(self.H))

    def rows(self):
        with np.errstate(divide="ignore"):
            mag2_db = 10.0 * np.log10(self.mag2)
        cols = (self.f, self.H.real, self.H.imag, self.mag2, self.phase_deg, self.dev_deg, mag2_db, self.group_delay)
        for values in zip(*cols):
            yield ["" if not np.isfinite(v) and i == 5 else repr(float(v)) for i, v in enumerate(values)]

    def to_csv(self, fh=None) -> str | None:
        """Write the response table; returns the text when ``fh`` is None."""
        buf = io.StringIO() if fh is None else fh
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        writer.writerows(self.rows())
        return buf.getvalue() if fh is None else None

    def summary(self) -> dict:
        return {
            "q": self.q,
            "dc_group_delay": self.dc_group_delay,
            "f_c": self.f_c,
            "v_LPF": self.v_LPF,
            "v_BPF": {str(k): v for k, v in self.v_BPF.items()},
            "max_deviation_deg": self.max_deviation_deg,
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=True)


def response_report(filt, f_c=None, n_grid: int = 1025, n_passband: int = 256) -> ResponseReport:
    """Evaluate a filter on ``[0, 0.5]`` merged with a dense passband sub-grid."""
    f_c = default_cutoff(filt) if f_c is None else float(f_c)
    f_pass, dev_pass, max_dev = phase_linearity_deviation(filt, filt.q, f_c, n_passband)
    f = np.union1d(np.linspace(0.0, 0.5, n_grid), f_pass)
    w = 2.0 * math.pi * f
    H = freq_response(filt, w)
    dev = np.full(f.shape, np.nan)
    dev[np.searchsorted(f, f_pass)] = dev_pass
    table = noise_gain_table(filt)
    return ResponseReport(
        f=f,
        H=H,
        dev_deg=dev,
        group_delay=group_delay(filt, w),
        q=float(filt.q),
        f_c=f_c,
        dc_group_delay=dc_group_delay(filt),
        v_LPF=noise_gains(filt, 0)[0],
        v_BPF=table,
        max_deviation_deg=max_dev,
    )
