"""Streaming realisation of estimator/predictor pairs.

Both filters of a pair share one input-and-feedback section in canonical
(companion) state-space form and differ only in their output vectors. The
predictor's output is fed back to unwrap the next raw angle: the new
measurement is placed on the branch closest to what was predicted for it.
FIR filters run through the same machinery with all poles at the origin, in
which case the state is simply the input buffer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .signals import wrap

__all__ = [
    "LssSystem",
    "TandemFilter",
    "TandemOutput",
    "build_lss",
    "run_fir_tandem",
    "run_tandem",
    "steady_state_iterative",
    "steady_state_vector",
]


def _ab(filt):
    b = np.asarray(filt.b, dtype=float)
    a = np.asarray(filt.a, dtype=float)
    K = max(len(b), len(a) - 1)
    a_full = np.zeros(K + 1)
    a_full[: len(a)] = a
    b_full = np.zeros(K)
    b_full[: len(b)] = b
    return b_full, a_full


@dataclass(eq=False)
class LssSystem:
    """``w[n] = G w[n-1] + H x[n]``, ``y = C w[n]`` in companion form.

    ``G`` carries ``-a[1:]`` along its first row and ones on the
    sub-diagonal; ``H`` is the first unit vector.
    """

    a: np.ndarray
    C_est: np.ndarray
    C_prd: np.ndarray

    @property
    def order(self) -> int:
        return len(self.a) - 1

    @property
    def G(self) -> np.ndarray:
        K = self.order
        G = np.eye(K, k=-1)
        G[0, :] = -self.a[1:]
        return G

    @property
    def H(self) -> np.ndarray:
        H = np.zeros(self.order)
        H[0] = 1.0
        return H

    def advance(self, w, x):
        """One state update; ``w`` may carry leading batch axes."""
        head = x - np.sum(w * self.a[1:], axis=-1)
        return np.concatenate([head[..., None], w[..., :-1]], axis=-1)

    def outputs(self, w):
        return np.sum(w * self.C_est, axis=-1), np.sum(w * self.C_prd, axis=-1)

    def simulate(self, x, w=None):
        """Run both outputs over a 1-D input from state ``w`` (zero by default)."""
        x = np.asarray(x, dtype=float)
        w = np.zeros(self.order) if w is None else np.array(w, dtype=float)
        est = np.empty_like(x)
        prd = np.empty_like(x)
        for n, xn in enumerate(x):
            w = self.advance(w, xn)
            est[n], prd[n] = self.outputs(w)
        return est, prd


def build_lss(est, prd) -> LssSystem:
    """Shared state-space section for an estimator and predictor with identical poles."""
    b_est, a_est = _ab(est)
    b_prd, a_prd = _ab(prd)
    if a_est.shape != a_prd.shape or not np.allclose(a_est, a_prd, rtol=0.0, atol=1e-12):
        raise ValueError("estimator and predictor must share the same denominator (same poles and order)")
    if a_est[0] != 1.0:
        raise ValueError("denominator must be monic (a[0] == 1)")
    return LssSystem(a=a_est, C_est=b_est, C_prd=b_prd)


def steady_state_vector(lss: LssSystem) -> np.ndarray:
    """State reached under a constant unit input: the solution of ``(I - G) w = H``."""
    K = lss.order
    if abs(np.sum(lss.a)) < 1e-300:
        raise ValueError("system has a pole at z = 1; no steady state")
    return np.linalg.solve(np.eye(K) - lss.G, lss.H)


def steady_state_iterative(lss: LssSystem, tol: float = 1e-12, max_iter: int = 1_000_000) -> np.ndarray:
    """Unit-step response state, iterated until the largest change is below ``tol``.

    The tolerance is relative to the size of the state, which for a
    narrow-band filter grows to ``1 / A(1)``.
    """
    w = np.zeros(lss.order)
    for _ in range(max_iter):
        new = lss.advance(w, 1.0)
        if np.max(np.abs(new - w)) < tol * max(1.0, np.max(np.abs(new))):
            return new
        w = new
    raise RuntimeError(f"steady state did not converge within {max_iter} steps")


@dataclass
class TandemOutput:
    """Per-sample streams from a tandem run (trailing axis is time).

    ``estimates`` are the smoothed values ``y[n]`` (valid at ``n - q``);
    ``predictions`` are ``x_hat[n]``, the expected unwrapped input at ``n + 1``;
    ``unwrapped`` are the unwrapped inputs ``x_bar[n]`` fed to the filters.
    """

    estimates: np.ndarray
    predictions: np.ndarray
    unwrapped: np.ndarray


class TandemFilter:
    """Estimator and predictor running side by side with predictor-driven unwrapping.

    Parameters
    ----------
    est, prd : FirFilter or IirFilter
        Designs sharing the same poles.
    unwrap_with : {"predictor", "estimator"}
        Output used as the reference for unwrapping. ``"estimator"`` is an
        ablation: the lagged estimate is a poor reference for an accelerating
        phase.
    """

    def __init__(self, est, prd, unwrap_with: str = "predictor"):
        if unwrap_with not in ("predictor", "estimator"):
            raise ValueError("unwrap_with must be 'predictor' or 'estimator'")
        self.lss = build_lss(est, prd)
        self.w0 = steady_state_vector(self.lss)
        self.unwrap_with = unwrap_with
        self.w = None
        self.x_hat = None
        self._ref = None

    @property
    def initialized(self) -> bool:
        return self.w is not None

    def reset(self):
        self.w = self.x_hat = self._ref = None

    def init(self, x0):
        """Seed the state as if ``x0`` had been applied forever."""
        x0 = np.asarray(x0, dtype=float)
        if not np.all(np.isfinite(x0)):
            raise ValueError("initial angle must be finite")
        self.w = x0[..., None] * self.w0
        y, self.x_hat = self.lss.outputs(self.w)
        self._ref = self.x_hat if self.unwrap_with == "predictor" else y
        return y, self.x_hat

    def step(self, x):
        """Consume one raw angle; return ``(estimate, prediction, unwrapped input)``."""
        if not self.initialized:
            raise RuntimeError("call init() before step()")
        x = np.asarray(x, dtype=float)
        if not np.all(np.isfinite(x)):
            raise ValueError("raw angle must be finite")
        x_bar = self._ref + wrap(x - self._ref)
        self.w = self.lss.advance(self.w, x_bar)
        y, self.x_hat = self.lss.outputs(self.w)
        self._ref = self.x_hat if self.unwrap_with == "predictor" else y
        return y, self.x_hat, x_bar

    def run(self, x) -> TandemOutput:
        """Initialise on the first sample and process the whole stream.

        ``x`` may have leading batch axes (e.g. one row per Monte Carlo
        trial); time runs along the last axis.
        """
        x = np.asarray(x, dtype=float)
        if not np.all(np.isfinite(x)):
            raise ValueError("raw angles must be finite")
        est = np.empty_like(x)
        prd = np.empty_like(x)
        unw = np.empty_like(x)
        est[..., 0], prd[..., 0] = self.init(x[..., 0])
        unw[..., 0] = x[..., 0]
        for n in range(1, x.shape[-1]):
            est[..., n], prd[..., n], unw[..., n] = self.step(x[..., n])
        return TandemOutput(est, prd, unw)


def run_tandem(est, prd, x, unwrap_with: str = "predictor") -> TandemOutput:
    return TandemFilter(est, prd, unwrap_with).run(x)


def run_fir_tandem(est, prd, x, unwrap_with: str = "predictor"):
    """Sliding-buffer tandem for FIR pairs; returns ``(estimates, predictions)``.

    The shared buffer is pre-filled with the first sample.
    """
    if len(est.h) != len(prd.h):
        raise ValueError("estimator and predictor must have the same length")
    out = run_tandem(est, prd, x, unwrap_with)
    return out.estimates, out.predictions
