"""FIR smoothers and predictors from whitened polynomial regression.

The taps evaluate, at ``m = q``, the polynomial of degree ``K1 - 1`` fitted to
the last ``M`` inputs by generalised least squares, with the residuals
whitened against the noise coloured by ``K0`` differentiators.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .colouring import coloured_covariance
from .exceptions import DesignError

__all__ = ["FirFilter", "design_fir", "fir_whitened_gram", "synthesis_vector"]

_COND_LIMIT = 1e12


@dataclass(frozen=True, eq=False)
class FirFilter:
    """Designed FIR low-pass filter.

    ``h`` is the impulse response (``h[0]`` multiplies the newest input).
    ``interpolating`` is set when ``K1 == M`` and there was no freedom left to
    minimise the noise gain.
    """

    h: np.ndarray
    K1: int
    K0: int
    q: float
    interpolating: bool = False
    kind: str = field(default="fir", init=False)

    @property
    def M(self) -> int:
        return len(self.h)

    @property
    def b(self) -> np.ndarray:
        return self.h

    @property
    def a(self) -> np.ndarray:
        return np.ones(1)

    def impulse_response(self, length=None) -> np.ndarray:
        if length is None:
            return self.h.copy()
        out = np.zeros(length)
        n = min(length, self.M)
        out[:n] = self.h[:n]
        return out


def synthesis_vector(q: float, K1: int, scale: float = 1.0) -> np.ndarray:
    """``[1, q, q**2, ...] / scale**k`` with ``0**0 == 1``."""
    return np.array([(q / scale) ** k if k else 1.0 for k in range(K1)])


def _vandermonde(M, K1, scale=1.0):
    m = np.arange(M, dtype=float) / scale
    return np.vander(m, K1, increasing=True)


def _whiten(M, K0):
    try:
        return cho_factor(coloured_covariance(K0, M))
    except LinAlgError as exc:  # pragma: no cover - covariance is always PD
        raise DesignError(f"coloured covariance (M={M}, K0={K0}) is not positive definite") from exc


def fir_whitened_gram(M: int, K1: int, K0: int):
    """Return ``(X^T W X, X^T W)`` with ``W`` the inverse noise covariance.

    ``X`` is the ``M x K1`` Vandermonde matrix with entries ``m**k``.
    ``W`` is applied through a Cholesky solve, never formed explicitly.
    """
    if not 1 <= K1 <= M:
        raise DesignError(f"need 1 <= K1 <= M, got K1={K1}, M={M}")
    X = _vandermonde(M, K1)
    WX = cho_solve(_whiten(M, K0), X)
    return X.T @ WX, WX.T


def design_fir(M: int, K1: int, K0: int, q: float | None = None) -> FirFilter:
    """Design an FIR smoother (``q >= 0``) or predictor (``q = -1``).

    Parameters
    ----------
    M : int
        Number of taps.
    K1 : int
        Number of monomial regressors; polynomials of degree ``K1 - 1`` pass
        through with delay ``q`` and no bias.
    K0 : int
        Number of differentiators the noise model assumes.
    q : float, optional
        Group delay in samples. Defaults to the linear-phase ``(M - 1) / 2``.

    Returns
    -------
    FirFilter
        Taps ``h`` with ``sum_m h[m] m**k == q**k`` for ``k < K1`` and minimum
        coloured-noise gain among all such taps.
    """
    if M < 1:
        raise DesignError("M must be at least 1")
    if K1 < 1:
        raise DesignError("K1 must be at least 1")
    if K1 > M:
        raise DesignError(f"K1={K1} exceeds the window length M={M}; normal equations are singular")
    if K0 < 0:
        raise DesignError("K0 must be non-negative")
    if q is None:
        q = (M - 1) / 2.0
    q = float(q)
    if not np.isfinite(q):
        raise DesignError("q must be finite")

    # Column scaling keeps the Gram matrix well conditioned; h is unchanged.
    scale = max(M - 1, 1)
    X = _vandermonde(M, K1, scale)
    WX = cho_solve(_whiten(M, K0), X)
    gram = X.T @ WX
    cond = np.linalg.cond(gram)
    if not np.isfinite(cond) or cond > _COND_LIMIT:
        raise DesignError("whitened normal equations are singular", condition=float(cond), M=M, K1=K1, K0=K0)
    coef = np.linalg.solve(gram, synthesis_vector(q, K1, scale))
    h = WX @ coef
    return FirFilter(h=h, K1=K1, K0=K0, q=q, interpolating=(K1 == M))
