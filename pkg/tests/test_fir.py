import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phasefilt.colouring import coloured_covariance
from phasefilt.exceptions import DesignError
from phasefilt.fir import design_fir, fir_whitened_gram, synthesis_vector


def _oracle(M, K1, K0, q):
    # explicit inverse covariance, textbook GLS evaluation
    W = np.linalg.inv(coloured_covariance(K0, M))
    X = np.vander(np.arange(M, dtype=float), K1, increasing=True)
    return W @ X @ np.linalg.solve(X.T @ W @ X, synthesis_vector(q, K1))


@pytest.mark.parametrize("M", [4, 9, 16])
@pytest.mark.parametrize("K1", [1, 2, 3])
@pytest.mark.parametrize("K0", [0, 1, 3])
def test_matches_explicit_gls(M, K1, K0):
    q = (M - 1) / 2
    np.testing.assert_allclose(design_fir(M, K1, K0).h, _oracle(M, K1, K0, q), atol=1e-9)
    np.testing.assert_allclose(design_fir(M, K1, K0, q=-1).h, _oracle(M, K1, K0, -1.0), atol=1e-8)


def test_rectangular_window():
    f = design_fir(64, 1, 0)
    np.testing.assert_allclose(f.h, np.full(64, 1 / 64))
    assert f.q == 31.5


def test_white_noise_k1_2_is_savitzky_golay_linear():
    from scipy.signal import savgol_coeffs

    M = 9
    sg = savgol_coeffs(M, 1, pos=(M - 1) // 2, use="dot")
    np.testing.assert_allclose(design_fir(M, 2, 0).h, sg, atol=1e-12)


@settings(deadline=None, max_examples=30)
@given(
    M=st.integers(3, 40),
    K1=st.integers(1, 3),
    K0=st.integers(0, 3),
    q=st.floats(-2, 40),
)
def test_moment_constraints_hold(M, K1, K0, q):
    if K1 > M:
        return
    h = design_fir(M, K1, K0, q).h
    m = np.arange(M, dtype=float)
    for k in range(K1):
        assert h @ m**k == pytest.approx(q**k if k else 1.0, rel=1e-8, abs=1e-8)


def test_minimises_coloured_gain():
    # any perturbation inside the constraint null space raises the gain
    M, K1, K0 = 20, 2, 1
    h = design_fir(M, K1, K0).h
    C = coloured_covariance(K0, M)
    X = np.vander(np.arange(M, dtype=float), K1, increasing=True)
    rng = np.random.default_rng(0)
    null = np.linalg.svd(X.T)[2][K1:].T
    base = h @ C @ h
    for _ in range(20):
        g = h + null @ rng.standard_normal(M - K1) * 1e-3
        assert g @ C @ g > base


def test_gram_is_symmetric():
    G, _ = fir_whitened_gram(12, 3, 2)
    np.testing.assert_allclose(G, G.T)


def test_interpolating_flag():
    assert design_fir(3, 3, 0).interpolating
    assert not design_fir(4, 3, 0).interpolating


@pytest.mark.parametrize("args", [(3, 4, 0), (0, 1, 0), (8, 0, 0), (8, 2, -1)])
def test_invalid_arguments(args):
    with pytest.raises(DesignError):
        design_fir(*args)


def test_impulse_response_padding():
    f = design_fir(4, 1, 0)
    assert f.impulse_response(6).tolist() == [0.25] * 4 + [0.0, 0.0]
    np.testing.assert_array_equal(f.a, [1.0])
