"""scikit-learn style wrappers around design and streaming estimation.

``fit`` designs the estimator/predictor pair from the hyper-parameters (no
training data is needed, but ``X`` is accepted so the objects drop into a
``Pipeline``). ``transform`` returns smoothed estimates and ``predict`` the
one-step-ahead predictions.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .analysis import noise_gain_table
from .realization import TandemFilter
from .signals import conjugate_product_angles
from .specfile import FilterSpec

__all__ = ["PhaseTracker", "WaveformFrequencyEstimator"]


def _check_angles(X):
    X = np.asarray(X)
    one_d = X.ndim == 1
    X = check_array(np.atleast_2d(X), dtype=np.float64, ensure_all_finite=True)
    return X, one_d


class PhaseTracker(TransformerMixin, BaseEstimator):
    """Smooth wrapped angle sequences with an estimator/predictor pair.

    Each row of ``X`` is an independent stream of raw angles in radians;
    time runs along the columns. The output is unwrapped.

    Parameters
    ----------
    kind : {"fir", "iir"}
    M : int
        FIR length.
    f_c : float
        Bessel basis cut-off (cycles/sample) for recursive designs.
    K1, K0 : int
        Flatness constraints and assumed differentiator count.
    K_phi : int
        Number of poles for recursive designs.
    q : str or float
        Estimator delay policy (``"optimal"``, ``"min-cng"``, ``"min-q"``)
        or an explicit delay.
    basis, norm, laguerre_p
        Passed to the recursive design.
    unwrap_with : {"predictor", "estimator"}

    Attributes
    ----------
    estimator_, predictor_ : designed filters
    delay_ : float
        Latency of ``transform`` output in samples.
    noise_gains_ : dict
        Coloured noise gain for 0..3 differentiators.
    """

    def __init__(
        self,
        kind="fir",
        M=64,
        f_c=None,
        K1=2,
        K0=1,
        K_phi=5,
        q="optimal",
        basis="bessel",
        norm="phase",
        laguerre_p=None,
        unwrap_with="predictor",
    ):
        self.kind = kind
        self.M = M
        self.f_c = f_c
        self.K1 = K1
        self.K0 = K0
        self.K_phi = K_phi
        self.q = q
        self.basis = basis
        self.norm = norm
        self.laguerre_p = laguerre_p
        self.unwrap_with = unwrap_with

    def _spec(self) -> FilterSpec:
        doc = {"kind": self.kind, "K1": self.K1, "K0": self.K0}
        if isinstance(self.q, str):
            doc["q_policy"] = self.q
        else:
            doc["q_policy"] = {"explicit": float(self.q)}
        if self.kind == "fir":
            doc["M"] = self.M
        else:
            doc.update(K_phi=self.K_phi, basis=self.basis, norm=self.norm)
            if self.f_c is not None:
                doc["f_c"] = self.f_c
            if self.laguerre_p is not None:
                doc["laguerre_p"] = self.laguerre_p
        return FilterSpec.from_dict(doc)

    def fit(self, X=None, y=None):
        if X is not None:
            _check_angles(X)
        pair = self._spec().design_pair()
        self.estimator_ = pair.estimator
        self.predictor_ = pair.predictor
        self.delay_ = float(pair.estimator.q)
        self.noise_gains_ = noise_gain_table(pair.estimator)
        return self

    def _run(self, X):
        check_is_fitted(self, "estimator_")
        X, one_d = _check_angles(X)
        out = TandemFilter(self.estimator_, self.predictor_, self.unwrap_with).run(X)
        return out, one_d

    def transform(self, X):
        """Smoothed, unwrapped angles; sample ``n`` estimates the input at ``n - delay_``."""
        out, one_d = self._run(X)
        return out.estimates[0] if one_d else out.estimates

    def predict(self, X):
        """Predicted unwrapped input for the next sample."""
        out, one_d = self._run(X)
        return out.predictions[0] if one_d else out.predictions


class WaveformFrequencyEstimator(BaseEstimator):
    """Instantaneous phase or frequency of complex sampled waveforms.

    ``alpha`` conjugate-product differentiators run before the low-pass
    filter and ``beta`` backward differences after it, so the estimated
    quantity is the ``alpha + beta``-th derivative of the phase. Rows of
    ``X`` are independent complex waveforms.

    Parameters
    ----------
    alpha : {0, 1}
    beta : int
    tracker : PhaseTracker, optional
        Unfitted template holding the filter hyper-parameters; a default
        FIR tracker is used when omitted.
    """

    def __init__(self, alpha=0, beta=1, tracker=None):
        self.alpha = alpha
        self.beta = beta
        self.tracker = tracker

    def fit(self, X=None, y=None):
        if self.alpha not in (0, 1):
            raise ValueError("alpha must be 0 or 1")
        if self.beta < 0:
            raise ValueError("beta must be non-negative")
        base = self.tracker if self.tracker is not None else PhaseTracker()
        self.tracker_ = PhaseTracker(**base.get_params()).fit()
        self.delay_ = self.tracker_.delay_ + 0.5 * (self.alpha + self.beta)
        return self

    def predict(self, X):
        """Estimates indexed by input sample; the first ``alpha + beta`` are nan.

        Entry ``n`` estimates the quantity at time ``n - delay_``.
        """
        check_is_fitted(self, "tracker_")
        X = np.asarray(X)
        one_d = X.ndim == 1
        X = np.atleast_2d(X)
        if X.ndim != 2 or not np.all(np.isfinite(X)):
            raise ValueError("X must be a finite 1-D or 2-D array of complex samples")
        if X.shape[1] < 2 + self.beta:
            raise ValueError("waveform is too short")
        raw = conjugate_product_angles(X) if self.alpha else np.angle(X)
        y = self.tracker_.transform(raw)
        if self.beta:
            y = np.diff(y, n=self.beta, axis=-1)
        out = np.full(X.shape, np.nan)
        out[:, X.shape[1] - y.shape[1]:] = y
        return out[0] if one_d else out
