"""Recursive smoothers and predictors with predetermined poles.

The filter is a weighted sum of first-order basis responses whose poles are
fixed up front (discretised Bessel prototype, all-origin, or a repeated real
pole). The weights minimise the coloured-noise gain ``c^H S c`` subject to
``K1`` derivative constraints at dc, which pin the passband group delay to
``q``. When ``q`` is free it is chosen among the stationary points of the
noise-gain polynomial ``v(q)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import factorial

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import brentq
from scipy.signal import lfilter

from .colouring import hpf_impulse
from .exceptions import DesignError

__all__ = [
    "BasisSet",
    "ConstraintSystem",
    "IirFilter",
    "assemble_tf",
    "basis_impulse",
    "basis_impulse_matrix",
    "bessel_poles",
    "bessel_prototype",
    "build_S",
    "cng_polynomial",
    "conjugate_pairs",
    "constraint_system",
    "dc_derivatives",
    "design_iir",
    "laguerre_basis",
    "origin_basis",
    "select_q",
    "solve_weights",
    "stationary_points",
    "real_parametrisation",
    "truncation_horizon",
]

BASIS_KINDS = ("bessel", "origin", "laguerre")
BESSEL_NORMS = ("phase", "mag", "delay")
Q_POLICIES = ("optimal", "min-cng", "min-q")

TAIL_TOL = 1e-14
MAX_HORIZON = 1_000_000
COND_LIMIT = 1e12
REFINE_STEPS = 3
_REAL_ROOT_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class BasisSet:
    """Poles of the first-order basis functions.

    ``bessel`` bases use ``z / (z - p_k)`` with distinct poles. ``origin`` uses
    pure delays ``z**-k``. ``laguerre`` uses ``z / (z - p)**(k + 1)`` with one
    repeated real pole, which reduces to the origin basis at ``p = 0``.
    """

    kind: str
    poles: np.ndarray
    f_c: float | None = None
    p: float | None = None
    norm: str | None = None

    def __post_init__(self):
        if self.kind not in BASIS_KINDS:
            raise ValueError(f"unknown basis kind {self.kind!r}")
        poles = np.asarray(self.poles, dtype=complex)
        if poles.ndim != 1 or poles.size == 0:
            raise ValueError("basis needs at least one pole")
        if np.any(np.abs(poles) >= 1.0):
            raise DesignError("basis poles must lie strictly inside the unit circle", poles=poles)
        object.__setattr__(self, "poles", poles)

    @property
    def size(self) -> int:
        return self.poles.size

    @property
    def radius(self) -> float:
        return float(np.max(np.abs(self.poles)))


def _reverse_bessel(order: int) -> np.ndarray:
    """Coefficients of the reverse Bessel polynomial, highest power first."""
    coef = [factorial(2 * order - k) // (2 ** (order - k) * factorial(k) * factorial(order - k)) for k in range(order + 1)]
    return np.array(coef[::-1], dtype=float)


def _conjugate_clean(roots):
    """Sort roots and make complex pairs exact conjugates."""
    roots = np.asarray(roots, dtype=complex)
    scale = np.max(np.abs(roots))
    real = np.sort(roots[np.abs(roots.imag) <= 1e-9 * scale].real)
    upper = roots[roots.imag > 1e-9 * scale]
    upper = upper[np.argsort(-upper.real)]
    out = [complex(r, 0.0) for r in real]
    for r in upper:
        out.extend([r, np.conj(r)])
    if len(out) != roots.size:
        raise DesignError("prototype roots are not closed under conjugation", roots=roots)
    return np.array(out)


def bessel_prototype(order: int, norm: str = "phase") -> np.ndarray:
    """Continuous-time Bessel poles for a unit cut-off frequency.

    ``norm`` selects what "cut-off" means:

    ``phase``
        Poles scaled so their product has unit magnitude; the phase response
        at the cut-off sits midway to its high-frequency asymptote.
    ``mag``
        ``|H(i)|**2 = 1/2`` for the unit-dc-gain prototype (3 dB point).
    ``delay``
        Unit group delay at dc (the raw roots of the reverse polynomial).
    """
    if norm not in BESSEL_NORMS:
        raise ValueError(f"unknown Bessel normalisation {norm!r}")
    if not 1 <= order <= 8:
        raise DesignError(f"Bessel order must be between 1 and 8, got {order}")
    poly = _reverse_bessel(order)
    try:
        roots = np.roots(poly)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise DesignError("Bessel root finding failed to converge") from exc
    roots = _conjugate_clean(roots)

    if norm == "phase":
        return roots / poly[-1] ** (1.0 / order)
    if norm == "mag":

        def excess(w):
            return abs(poly[-1] / np.polyval(poly, 1j * w)) ** 2 - 0.5

        hi = 1.0
        while excess(hi) > 0:
            hi *= 2.0
        w3 = brentq(excess, 0.0, hi, xtol=1e-12, rtol=4 * np.finfo(float).eps)
        return roots / w3
    return roots


def bessel_poles(K_phi: int, f_c: float, norm: str = "phase") -> BasisSet:
    """Matched-z discretisation ``p_k = exp(s_k)`` of a Bessel prototype with cut-off ``f_c``.

    Parameters
    ----------
    K_phi : int
        Number of poles (1 to 8).
    f_c : float
        Cut-off frequency in cycles per sample, ``0 < f_c < 0.5``.
    norm : {"phase", "mag", "delay"}
        Cut-off convention, see :func:`bessel_prototype`.
    """
    if not 0.0 < f_c < 0.5:
        raise DesignError(f"f_c must lie in (0, 0.5), got {f_c}")
    s = bessel_prototype(K_phi, norm) * (2.0 * math.pi * f_c)
    return BasisSet("bessel", np.exp(s), f_c=float(f_c), norm=norm)


def origin_basis(K_phi: int) -> BasisSet:
    """All poles at the origin; the resulting filter is FIR with ``K_phi`` taps."""
    if K_phi < 1:
        raise DesignError("K_phi must be at least 1")
    return BasisSet("origin", np.zeros(K_phi, dtype=complex))


def laguerre_basis(K_phi: int, p: float) -> BasisSet:
    if K_phi < 1:
        raise DesignError("K_phi must be at least 1")
    if not 0.0 <= p < 1.0:
        raise DesignError(f"Laguerre pole must lie in [0, 1), got {p}")
    return BasisSet("laguerre", np.full(K_phi, p, dtype=complex), p=float(p))


def basis_impulse_matrix(basis: BasisSet, length: int) -> np.ndarray:
    """``length x K_phi`` matrix whose columns are the basis impulse responses."""
    K = basis.size
    m = np.arange(length)
    if basis.kind == "bessel":
        return basis.poles[None, :] ** m[:, None]
    if basis.kind == "origin":
        return np.eye(length, K, dtype=complex)
    p = basis.p
    out = np.empty((length, K), dtype=complex)
    out[:, 0] = p**m
    for k in range(1, K):
        # z / (z-p)**(k+1) = [z / (z-p)**k] * z**-1 / (1 - p z**-1)
        out[:, k] = lfilter([0.0, 1.0], [1.0, -p], out[:, k - 1].real)
    return out


def basis_impulse(basis: BasisSet, k: int, length: int) -> np.ndarray:
    if not 0 <= k < basis.size:
        raise IndexError(f"basis index {k} out of range for {basis.size} functions")
    return basis_impulse_matrix(basis, length)[:, k]


def truncation_horizon(basis: BasisSet, K0: int = 0, degree: int = 0, tol: float = TAIL_TOL) -> int:
    """Number of samples after which every basis response (times ``m**degree``) is below ``tol``.

    Starts from the geometric bound ``ln(tol) / ln(max |p|)`` and extends it
    for the polynomial growth of repeated poles and moment weights.
    """
    r = basis.radius
    if r == 0.0:
        return basis.size + K0
    growth = degree + (basis.size - 1 if basis.kind == "laguerre" else 0)
    n = math.ceil(math.log(tol) / math.log(r))
    while growth and n < MAX_HORIZON and growth * math.log(n) + n * math.log(r) > math.log(tol):
        n = math.ceil(n * 1.25)
    return min(n + basis.size + K0, MAX_HORIZON)


def build_S(basis: BasisSet, K0: int, horizon: int | None = None) -> np.ndarray:
    """Hermitian matrix of coloured cross-powers ``S[j, k] = sum_n conj(g_j[n]) g_k[n]``.

    ``g_k`` is basis response ``k`` passed through ``K0`` differentiators.
    """
    if horizon is None:
        horizon = truncation_horizon(basis, K0)
    phi = basis_impulse_matrix(basis, horizon)
    padded = np.vstack([phi, np.zeros((K0, basis.size), dtype=complex)])
    g = lfilter(hpf_impulse(K0), [1.0], padded, axis=0)
    S = g.conj().T @ g
    return 0.5 * (S + S.conj().T)


def dc_derivatives(basis: BasisSet, K1: int, horizon: int | None = None) -> np.ndarray:
    """``K1 x K_phi`` matrix of frequency-response derivatives at dc.

    Row ``k1`` holds ``sum_m phi_k[m] (-i m)**k1``, the ``k1``-th derivative of
    ``phi_k(exp(i w))`` at ``w = 0``.
    """
    if K1 < 1:
        raise ValueError("K1 must be at least 1")
    if horizon is None:
        horizon = truncation_horizon(basis, 0, degree=K1 - 1)
    phi = basis_impulse_matrix(basis, horizon)
    m = np.arange(horizon, dtype=float)
    return np.array([((-1j * m) ** k1) @ phi for k1 in range(K1)])


def _desired(q, K1):
    return np.array([(-1j * q) ** k if k else 1.0 + 0j for k in range(K1)])


def conjugate_pairs(basis: BasisSet):
    """Index of the conjugate partner of each pole, or ``None`` if the set is not closed."""
    poles = basis.poles
    tol = 1e-12 * max(1.0, basis.radius)
    partner = []
    for p in poles:
        hits = np.flatnonzero(np.abs(poles - np.conj(p)) <= tol)
        if hits.size == 0:
            return None
        partner.append(int(hits[0]))
    return partner


def real_parametrisation(basis: BasisSet):
    """Matrix ``T`` such that ``c = T r`` with real ``r`` spans all real-response weights.

    Real poles contribute a unit column; a conjugate pair contributes the
    combinations giving ``2 Re phi`` and ``2 Im phi``. Returns ``None`` when
    the pole set is not closed under conjugation.
    """
    partner = conjugate_pairs(basis)
    if partner is None:
        return None
    K = basis.size
    if basis.kind != "bessel":
        return np.eye(K, dtype=complex)
    T = np.zeros((K, K), dtype=complex)
    col = 0
    seen = set()
    for k, j in enumerate(partner):
        if k in seen:
            continue
        if j == k:
            T[k, col] = 1.0
            col += 1
        else:
            T[k, col], T[j, col] = 1.0, 1.0
            T[k, col + 1], T[j, col + 1] = -1j, 1j
            col += 2
        seen.update((k, j))
    return T


@dataclass(eq=False)
class ConstraintSystem:
    """Noise-gain matrix ``S`` and dc-derivative matrix ``Phi`` for one basis.

    When ``T`` is given (conjugate-closed poles) the problem is solved over
    real coordinates ``r`` with ``c = T r``, which keeps the weights exactly
    conjugate-symmetric. Row ``k1`` of ``Phi T`` is then ``(-i)**k1`` times a
    real vector, so the constraints reduce to real moment equations
    ``R r = [1, q, q**2, ...]``.

    Solves are done in equilibrated coordinates: the noise-gain matrix is
    scaled to a unit diagonal and each constraint row to unit norm.
    """

    S: np.ndarray
    Phi: np.ndarray
    T: np.ndarray | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def K1(self) -> int:
        return self.Phi.shape[0]

    @property
    def K_phi(self) -> int:
        return self.S.shape[0]

    def d(self, q: float) -> np.ndarray:
        return _desired(q, self.K1)

    def _unit(self):
        return np.array([(-1j) ** k for k in range(self.K1)])

    def _reduced(self):
        """Working ``(S, Phi, d-map)``; ``d-map`` turns ``[1, q, ...]`` into the right-hand side."""
        if self.T is None:
            return self.S, self.Phi, self._unit()
        T = self.T
        S = T.conj().T @ self.S @ T
        R = (np.conj(self._unit())[:, None] * self.Phi) @ T
        scale = max(np.max(np.abs(S)), 1e-300)
        if np.max(np.abs(S.imag)) > 1e-10 * scale:
            raise DesignError("noise-gain matrix is not real in the conjugate-pair coordinates")
        return S.real, R.real, np.ones(self.K1)

    def _factor(self):
        if "factor" in self._cache:
            return self._cache["factor"]
        if self.K_phi < self.K1:
            raise DesignError(
                f"basis has {self.K_phi} functions but {self.K1} constraints; need K_phi >= K1",
                K_phi=self.K_phi,
                K1=self.K1,
            )
        S, Phi, dmap = self._reduced()
        e = 1.0 / np.sqrt(np.real(np.diag(S)))
        S = S * e[:, None] * e[None, :]
        cond_S = np.linalg.cond(S)
        if not np.isfinite(cond_S) or cond_S > COND_LIMIT:
            raise DesignError("S is ill-conditioned; rounding errors would dominate", condition=float(cond_S))
        Phi = Phi * e[None, :]
        rows = 1.0 / np.linalg.norm(Phi, axis=1)
        Phi = Phi * rows[:, None]
        SiPh = np.linalg.solve(S, Phi.conj().T)
        gram = Phi @ SiPh
        gram = 0.5 * (gram + gram.conj().T)
        cond_g = np.linalg.cond(gram)
        if not np.isfinite(cond_g) or cond_g > COND_LIMIT:
            raise DesignError(
                "Phi S^-1 Phi^H is ill-conditioned; rounding errors would dominate", condition=float(cond_g)
            )
        self._cache["factor"] = (e, rows, SiPh, gram, float(cond_S), float(cond_g), dmap, Phi)
        return self._cache["factor"]

    @property
    def conditioning(self) -> tuple[float, float]:
        """Condition numbers of the equilibrated ``S`` and ``Phi S^-1 Phi^H``."""
        return self._factor()[4:6]

    def gain_matrix(self) -> np.ndarray:
        """``Q = (Phi S^-1 Phi^H)^-1``, so that ``v(q) = d(q)^H Q d(q)``."""
        e, rows, SiPh, gram, *_ = self._factor()
        Q = np.linalg.inv(gram) * rows[:, None] * rows[None, :]
        if self.T is not None:
            # real coordinates measure [1, q, ...]; d(q) carries the (-i)**k factors
            unit = self._unit()
            Q = unit[:, None] * Q * np.conj(unit)[None, :]
        return 0.5 * (Q + Q.conj().T)

    def solve(self, q: float) -> np.ndarray:
        e, rows, SiPh, gram, _, _, dmap, Phi = self._factor()
        qpow = np.array([q**k if k else 1.0 for k in range(self.K1)])
        target = rows * dmap * qpow
        lam = np.linalg.solve(gram, target)
        # refinement in the multipliers keeps c inside range(S^-1 Phi^H), so it
        # stays optimal while the constraint residual shrinks
        for _ in range(REFINE_STEPS):
            lam = lam + np.linalg.solve(gram, target - Phi @ (SiPh @ lam))
        c = e * (SiPh @ lam)
        return c if self.T is None else self.T @ c


def constraint_system(basis: BasisSet, K1: int, K0: int) -> ConstraintSystem:
    horizon = truncation_horizon(basis, K0, degree=K1 - 1)
    return ConstraintSystem(
        build_S(basis, K0, horizon), dc_derivatives(basis, K1, horizon), real_parametrisation(basis)
    )


def solve_weights(system: ConstraintSystem, q: float) -> np.ndarray:
    """Minimum-``c^H S c`` weights meeting ``Phi c = d(q)``.

    Equivalent to ``c = S^-1 Phi^H (Phi S^-1 Phi^H)^-1 d(q)``.
    """
    return system.solve(q)


def cng_polynomial(system: ConstraintSystem) -> Polynomial:
    """Coloured-noise gain ``v(q) = d(q)^H Q d(q)`` as a real polynomial in ``q``.

    Has degree ``2 (K1 - 1)``; constant for ``K1 = 1``.
    """
    Q = system.gain_matrix()
    K1 = system.K1
    unit = np.array([(-1j) ** k for k in range(K1)])
    terms = np.conj(unit)[:, None] * Q * unit[None, :]
    coef = np.zeros(2 * K1 - 1, dtype=complex)
    for j in range(K1):
        for k in range(K1):
            coef[j + k] += terms[j, k]
    scale = np.max(np.abs(coef))
    residue = np.max(np.abs(coef.imag)) / scale if scale else 0.0
    if residue > 1e-10:
        raise DesignError("noise-gain polynomial has non-negligible imaginary coefficients", residue=residue)
    return Polynomial(coef.real)


def stationary_points(poly: Polynomial) -> np.ndarray:
    """Sorted real roots of ``poly'`` (companion-matrix eigenvalues, Newton polished)."""
    deriv = poly.deriv()
    c = deriv.coef
    if c.size < 2 or not np.any(c[1:]):
        return np.array([])
    # balance the coefficients so the companion matrix is well scaled
    nz = c[np.nonzero(c)[0][0]]
    tau = (abs(nz) / abs(c[-1])) ** (1.0 / (c.size - 1 - np.nonzero(c)[0][0])) if abs(nz) else 1.0
    tau = tau or 1.0
    scaled = Polynomial(c * tau ** np.arange(c.size))
    roots = scaled.roots() * tau
    real = np.sort(roots[np.abs(roots.imag) < _REAL_ROOT_TOL * (1.0 + np.abs(roots.real))].real)
    dd = deriv.deriv()
    for _ in range(3):
        slope = dd(real)
        real = np.where(slope != 0, real - deriv(real) / np.where(slope != 0, slope, 1.0), real)
    return real


def select_q(poly: Polynomial, K1: int, policy="optimal") -> float:
    """Pick the group delay from the stationary points of ``v(q)``.

    Policies
    --------
    ``optimal``
        ``K1 == 2``: the single minimum. ``K1 == 3``: the middle of the three
        stationary points, which has the best passband phase linearity.
        ``K1 > 3``: the smallest ``q``.
    ``min-q``
        Smallest stationary point.
    ``min-cng``
        Stationary point with the lowest noise gain.
    number or ``{"explicit": q}``
        Used as is (``-1`` for a one-sample-ahead predictor).
    """
    if isinstance(policy, dict):
        if set(policy) != {"explicit"}:
            raise ValueError(f"unrecognised q policy {policy!r}")
        policy = policy["explicit"]
    if not isinstance(policy, str):
        q = float(policy)
        if not np.isfinite(q):
            raise ValueError("explicit q must be finite")
        return q
    if policy not in Q_POLICIES:
        raise ValueError(f"unknown q policy {policy!r}; expected one of {Q_POLICIES} or a number")
    if K1 < 2:
        raise ValueError("q is not adjustable for K1 < 2; pass an explicit value")

    roots = stationary_points(poly)
    expected = 2 * (K1 - 1) - 1
    if roots.size == 0:
        raise DesignError("noise-gain polynomial has no real stationary point", coefficients=poly.coef.tolist())
    if policy == "min-q":
        return float(roots[0])
    if policy == "min-cng":
        return float(roots[np.argmin(poly(roots))])
    if K1 == 2:
        return float(roots[0])
    if K1 == 3:
        if roots.size != expected:
            raise DesignError(
                f"expected {expected} real stationary points for K1=3, found {roots.size}",
                roots=roots.tolist(),
            )
        return float(roots[1])
    return float(roots[0])


@dataclass(frozen=True, eq=False)
class IirFilter:
    """Recursive filter ``H(z) = B(z) / A(z)`` in powers of ``z**-1``.

    ``b`` holds ``b[0] .. b[K_phi - 1]`` (the coefficient of ``z**-K_phi`` is
    zero); ``a`` holds ``a[0] = 1 .. a[K_phi]``.
    """

    b: np.ndarray
    a: np.ndarray
    c: np.ndarray
    basis: BasisSet
    q: float
    K1: int
    K0: int
    diagnostics: dict = field(default_factory=dict)
    kind: str = field(default="iir", init=False)

    @property
    def poles(self) -> np.ndarray:
        return self.basis.poles

    @property
    def K_phi(self) -> int:
        return self.basis.size

    @property
    def f_c(self):
        return self.basis.f_c

    def horizon(self, degree: int = 0) -> int:
        return truncation_horizon(self.basis, 0, degree)

    def impulse_response(self, length: int | None = None) -> np.ndarray:
        """Realised impulse response from the difference equation."""
        if length is None:
            length = self.horizon()
        delta = np.zeros(length)
        delta[0] = 1.0
        return lfilter(self.b, self.a, delta)


def assemble_tf(basis: BasisSet, c, q=None, K1=None, K0=None, imag_tol: float = 1e-8) -> IirFilter:
    """Put ``sum_k c_k phi_k(z)`` over the common denominator ``prod (1 - p_k z**-1)``."""
    c = np.asarray(c, dtype=complex)
    K = basis.size
    if c.shape != (K,):
        raise ValueError(f"need {K} weights, got shape {c.shape}")
    a = np.poly(basis.poles)
    if np.max(np.abs(a.imag)) > imag_tol * np.max(np.abs(a)):
        raise DesignError("basis poles are not conjugate-symmetric; denominator is complex")
    a = a.real

    h_head = basis_impulse_matrix(basis, K + 1) @ c
    num = np.convolve(a, h_head)[: K + 1]
    peak = np.max(np.abs(num))
    residue = float(np.max(np.abs(num.imag)) / peak) if peak else 0.0
    if residue > imag_tol:
        raise DesignError(
            "numerator has non-negligible imaginary components; the basis set is unsuitable", imag_residue=residue
        )
    if abs(num[K]) > 1e-9 * peak:  # pragma: no cover - every supported basis has deg B < K
        raise DesignError("numerator degree reaches K_phi; filter is not realisable in canonical form")
    b = num[:K].real
    return IirFilter(b=b, a=a, c=c, basis=basis, q=q, K1=K1, K0=K0, diagnostics={"imag_residue_b": residue})


def _dc_delay(b, a):
    kb = np.arange(len(b))
    ka = np.arange(len(a))
    return float(kb @ b / b.sum() - ka @ a / a.sum())


def make_basis(basis: str = "bessel", K_phi: int = 5, f_c: float | None = None, norm: str = "phase", laguerre_p=None):
    if basis == "bessel":
        if f_c is None:
            raise DesignError("bessel basis needs f_c")
        return bessel_poles(K_phi, f_c, norm)
    if basis == "origin":
        return origin_basis(K_phi)
    if basis == "laguerre":
        if laguerre_p is None:
            raise DesignError("laguerre basis needs laguerre_p")
        return laguerre_basis(K_phi, laguerre_p)
    raise DesignError(f"unknown basis {basis!r}")


def design_iir(
    K_phi: int = 5,
    f_c: float | None = None,
    K1: int = 2,
    K0: int = 0,
    q="optimal",
    basis: str | BasisSet = "bessel",
    norm: str = "phase",
    laguerre_p: float | None = None,
) -> IirFilter:
    """Design a recursive smoother or predictor end to end.

    ``q`` is a policy name (see :func:`select_q`) or an explicit delay. For
    ``K1 == 1`` the delay cannot be controlled; any policy name is accepted
    and the realised dc group delay is reported as ``q``.

    Examples
    --------
    >>> est = design_iir(K_phi=5, f_c=1 / 64, K1=2, K0=3)
    >>> round(est.q, 3)
    39.626
    >>> prd = design_iir(K_phi=5, f_c=1 / 64, K1=2, K0=3, q=-1)
    """
    if not isinstance(basis, BasisSet):
        basis = make_basis(basis, K_phi, f_c, norm, laguerre_p)
    system = constraint_system(basis, K1, K0)
    poly = cng_polynomial(system)

    explicit = not isinstance(q, str)
    if K1 == 1 and not explicit:
        q_design = 0.0
    else:
        q_design = select_q(poly, K1, q)

    c = solve_weights(system, q_design)
    filt = assemble_tf(basis, c, K1=K1, K0=K0)
    if K1 == 1 and not explicit:
        q_design = _dc_delay(filt.b, filt.a)

    v_bpf = float(np.real(np.conj(c) @ system.S @ c))
    h = filt.impulse_response()
    h_complex = basis_impulse_matrix(basis, h.size) @ c
    imag_h = float(np.max(np.abs(h_complex.imag)) / np.max(np.abs(h_complex)))
    if imag_h > 1e-8:
        raise DesignError("impulse response has non-negligible imaginary part", imag_residue=imag_h)
    cond_S, cond_gram = system.conditioning
    diagnostics = dict(filt.diagnostics)
    diagnostics.update(
        v_LPF=float(h @ h),
        v_BPF=v_bpf,
        v_BPF_poly=float(poly(q_design)),
        imag_residue_h=imag_h,
        cond_S=cond_S,
        cond_constraints=cond_gram,
        cng_coefficients=poly.coef.tolist(),
        stationary_points=stationary_points(poly).tolist() if K1 > 1 else [],
    )
    return IirFilter(b=filt.b, a=filt.a, c=c, basis=basis, q=float(q_design), K1=K1, K0=K0, diagnostics=diagnostics)
