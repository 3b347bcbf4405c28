import numpy as np
import pytest
from numpy.polynomial import Polynomial
from scipy.signal import besselap, lfilter

from phasefilt.analysis import dc_group_delay
from phasefilt.colouring import hpf_impulse
from phasefilt.exceptions import DesignError
from phasefilt.iir import (
    BasisSet,
    ConstraintSystem,
    basis_impulse_matrix,
    bessel_poles,
    bessel_prototype,
    cng_polynomial,
    constraint_system,
    design_iir,
    laguerre_basis,
    origin_basis,
    real_parametrisation,
    select_q,
    stationary_points,
    truncation_horizon,
)


def _sorted(z):
    z = np.asarray(z)
    return z[np.lexsort((z.imag, z.real))]


@pytest.mark.parametrize("order", range(1, 9))
@pytest.mark.parametrize("norm", ["phase", "mag", "delay"])
def test_prototype_matches_scipy(order, norm):
    _, p, _ = besselap(order, norm=norm)
    np.testing.assert_allclose(_sorted(bessel_prototype(order, norm)), _sorted(p), rtol=1e-9)


def test_discretisation_is_matched_z():
    b = bessel_poles(5, 1 / 64)
    s = besselap(5, norm="phase")[1] * 2 * np.pi / 64
    np.testing.assert_allclose(_sorted(b.poles), _sorted(np.exp(s)), rtol=1e-12)
    assert b.radius < 1


def test_basis_rejects_unstable_poles():
    with pytest.raises(DesignError):
        BasisSet("bessel", [1.0, 0.5])
    with pytest.raises(DesignError):
        bessel_poles(5, 0.6)


def test_laguerre_columns_match_transfer_functions():
    p, K, L = 0.6, 4, 60
    phi = basis_impulse_matrix(laguerre_basis(K, p), L)
    delta = np.zeros(L)
    delta[0] = 1
    for k in range(K):
        # z / (z - p)**(k + 1) = z**-k / (1 - p z**-1)**(k + 1)
        den = np.poly(np.full(k + 1, p))
        num = np.zeros(k + 1)
        num[k] = 1
        np.testing.assert_allclose(phi[:, k].real, lfilter(num, den, delta), atol=1e-14)


def test_real_parametrisation_spans_real_responses():
    basis = bessel_poles(5, 1 / 32)
    T = real_parametrisation(basis)
    rng = np.random.default_rng(1)
    h = basis_impulse_matrix(basis, 50) @ (T @ rng.standard_normal(5))
    assert np.max(np.abs(h.imag)) < 1e-12
    assert np.linalg.matrix_rank(T) == 5


def _oracle_impulse(basis, K1, K0, q, L):
    """Brute-force design: explicit impulse responses and an equality-constrained LS KKT."""
    T = real_parametrisation(basis)
    delta = np.zeros(L)
    delta[0] = 1
    cols = [lfilter([1.0], [1.0, -p], delta.astype(complex)) for p in basis.poles]
    B = (np.column_stack(cols) @ T).real
    G = lfilter(hpf_impulse(K0), [1.0], np.vstack([B, np.zeros((K0, B.shape[1]))]), axis=0)
    m = np.arange(L, dtype=float)
    A = np.array([m**k @ B for k in range(K1)])
    d = np.array([q**k if k else 1.0 for k in range(K1)])
    n = B.shape[1]
    kkt = np.block([[2 * G.T @ G, A.T], [A, np.zeros((K1, K1))]])
    sol = np.linalg.solve(kkt, np.r_[np.zeros(n), d])
    return B @ sol[:n]


@pytest.mark.parametrize("K1, K0, q", [(1, 0, None), (2, 1, 12.0), (2, 2, -1.0), (3, 2, 10.0)])
def test_design_matches_bruteforce(K1, K0, q):
    basis = bessel_poles(4, 1 / 16)
    filt = design_iir(basis=basis, K1=K1, K0=K0, q="optimal" if q is None else q)
    L = 600
    np.testing.assert_allclose(filt.impulse_response(L), _oracle_impulse(basis, K1, K0, filt.q, L), atol=1e-7)


def test_complex_and_real_paths_agree():
    basis = bessel_poles(5, 1 / 64)
    real = constraint_system(basis, 3, 3)
    cplx = ConstraintSystem(real.S, real.Phi)
    np.testing.assert_allclose(real.solve(39.6), cplx.solve(39.6), rtol=1e-6)
    np.testing.assert_allclose(cng_polynomial(real).coef, cng_polynomial(cplx).coef, rtol=1e-6)


@pytest.mark.parametrize("K1", [2, 3])
def test_cng_polynomial_matches_direct_gain(K1):
    basis = bessel_poles(5, 1 / 40)
    system = constraint_system(basis, K1, 2)
    poly = cng_polynomial(system)
    for q in (-1.0, 10.0, 30.0):
        c = system.solve(q)
        assert np.real(np.conj(c) @ system.S @ c) == pytest.approx(poly(q), rel=1e-6)


def test_optimal_q_is_local_minimum():
    filt = design_iir(5, 1 / 64, K1=2, K0=3)
    poly = Polynomial(filt.diagnostics["cng_coefficients"])
    assert poly(filt.q) < poly(filt.q - 0.5)
    assert poly(filt.q) < poly(filt.q + 0.5)


def test_select_q_policies():
    # v(q) with stationary points at 1, 2 and 4
    deriv = Polynomial.fromroots([1.0, 2.0, 4.0])
    poly = deriv.integ()
    assert select_q(poly, 3) == pytest.approx(2.0)
    assert select_q(poly, 3, "min-q") == pytest.approx(1.0)
    assert select_q(poly, 3, "min-cng") == pytest.approx(4.0)
    assert select_q(poly, 3, {"explicit": -1}) == -1.0
    assert select_q(poly, 3, 7.5) == 7.5
    with pytest.raises(ValueError):
        select_q(poly, 3, "median")
    with pytest.raises(ValueError):
        select_q(poly, 1, "optimal")


def test_stationary_points_of_well_separated_cubic():
    roots = np.array([-3.0, 0.5, 120.0])
    np.testing.assert_allclose(stationary_points(Polynomial.fromroots(roots).integ()), roots, rtol=1e-10)


def test_missing_stationary_point_raises():
    with pytest.raises(DesignError):
        select_q(Polynomial([1.0, 0.0, 0.5, 0.0, 0.25]), 3)


def test_predictor_has_unit_lead():
    prd = design_iir(5, 1 / 64, K1=2, K0=3, q=-1)
    assert dc_group_delay(prd) == pytest.approx(-1.0, abs=1e-4)


def test_k1_one_reports_realised_delay():
    filt = design_iir(5, 1 / 32, K1=1, K0=1)
    assert filt.q == pytest.approx(dc_group_delay(filt))
    assert filt.b.sum() / filt.a.sum() == pytest.approx(1.0)


def test_origin_basis_is_fir():
    filt = design_iir(K_phi=6, K1=2, K0=1, q=2.5, basis="origin")
    assert np.count_nonzero(filt.a[1:]) == 0
    assert filt.impulse_response(10)[6:].tolist() == [0.0] * 4


def test_laguerre_at_zero_reduces_to_origin():
    a = design_iir(K_phi=6, K1=2, K0=1, q=2.5, basis="laguerre", laguerre_p=0.0)
    b = design_iir(K_phi=6, K1=2, K0=1, q=2.5, basis="origin")
    np.testing.assert_allclose(a.b, b.b, atol=1e-12)


def test_laguerre_design_meets_constraints():
    filt = design_iir(K_phi=5, K1=2, K0=1, q=6.0, basis="laguerre", laguerre_p=0.7)
    h = filt.impulse_response()
    m = np.arange(h.size)
    assert h.sum() == pytest.approx(1.0, rel=1e-9)
    assert m @ h == pytest.approx(6.0, rel=1e-7)


def test_horizon_bounds_tail():
    basis = bessel_poles(5, 1 / 64)
    n = truncation_horizon(basis)
    assert basis.radius**n < 1e-13
    assert truncation_horizon(origin_basis(4), K0=2) == 6


def test_ill_conditioned_request_is_reported():
    with pytest.raises(DesignError) as info:
        design_iir(8, 1 / 400, K1=3, K0=3)
    assert info.value.diagnostics


def test_missing_cutoff():
    with pytest.raises(DesignError):
        design_iir(5, None, K1=2, K0=0)
