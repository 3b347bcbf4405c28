import numpy as np
import pytest
from scipy.signal import lfilter

from phasefilt.fir import design_fir
from phasefilt.iir import design_iir
from phasefilt.realization import (
    LssSystem,
    TandemFilter,
    build_lss,
    run_fir_tandem,
    run_tandem,
    steady_state_iterative,
    steady_state_vector,
)
from phasefilt.signals import wrap


def _random_stable(rng, order):
    n_pairs = rng.integers(0, order // 2 + 1)
    r = rng.uniform(0.0, 0.97, n_pairs)
    ang = rng.uniform(0.0, np.pi, n_pairs)
    poles = list(r * np.exp(1j * ang)) + list(r * np.exp(-1j * ang))
    poles += list(rng.uniform(-0.97, 0.97, order - 2 * n_pairs))
    return np.poly(poles).real, rng.standard_normal(order)


def test_lss_matches_difference_equation():
    rng = np.random.default_rng(7)
    for _ in range(50):
        order = int(rng.integers(1, 9))
        a, b = _random_stable(rng, order)
        x = rng.standard_normal(120)
        est, _ = LssSystem(a, b, b).simulate(x)
        np.testing.assert_allclose(est, lfilter(b, a, x), atol=1e-10)


def test_companion_matrices():
    lss = LssSystem(np.array([1.0, -0.5, 0.25]), np.zeros(2), np.zeros(2))
    np.testing.assert_array_equal(lss.G, [[0.5, -0.25], [1.0, 0.0]])
    np.testing.assert_array_equal(lss.H, [1.0, 0.0])


def test_steady_state_vector_matches_iteration():
    est = design_iir(5, 1 / 32, K1=2, K0=1)
    lss = build_lss(est, design_iir(5, 1 / 32, K1=2, K0=1, q=-1))
    w = steady_state_vector(lss)
    np.testing.assert_allclose(w, steady_state_iterative(lss), rtol=1e-9)
    # constant input in, same constant out of both filters
    y, x_hat = lss.outputs(w)
    assert y == pytest.approx(1.0, rel=1e-9)
    assert x_hat == pytest.approx(1.0, rel=1e-9)


def test_mismatched_denominators_rejected():
    with pytest.raises(ValueError):
        build_lss(design_iir(5, 1 / 32, K1=2), design_iir(5, 1 / 40, K1=2, q=-1))


def _ramp(slope, n, offset=0.3):
    return offset + slope * np.arange(n)


PAIRS = {
    "fir-k2": lambda q: design_fir(16, 2, 1, q),
    "fir-k3": lambda q: design_fir(32, 3, 0, q),
    "iir-k2": lambda q: design_iir(5, 1 / 16, K1=2, K0=1, q=q),
    "iir-k3": lambda q: design_iir(5, 1 / 32, K1=3, K0=2, q=q),
}


@pytest.mark.parametrize("name", sorted(PAIRS))
def test_tracks_wrapped_ramp(name):
    make = PAIRS[name]
    est = make(None) if name.startswith("fir") else make("optimal")
    prd = make(-1.0)
    theta = _ramp(0.2, 400)
    out = run_tandem(est, prd, wrap(theta))
    np.testing.assert_allclose(out.unwrapped, theta, atol=1e-9)
    n = np.arange(200, 400)
    np.testing.assert_allclose(out.estimates[n], 0.3 + 0.2 * (n - est.q), atol=1e-6)
    np.testing.assert_allclose(out.predictions[n], 0.3 + 0.2 * (n + 1), atol=1e-6)


def test_constant_input_has_no_transient():
    est = design_iir(5, 1 / 64, K1=2, K0=3)
    prd = design_iir(5, 1 / 64, K1=2, K0=3, q=-1)
    out = run_tandem(est, prd, np.full(50, 2.0))
    np.testing.assert_allclose(out.estimates, 2.0, rtol=1e-9)


def test_batch_rows_are_independent():
    est, prd = design_fir(16, 2, 1), design_fir(16, 2, 1, -1)
    rng = np.random.default_rng(0)
    x = wrap(rng.standard_normal((3, 100)).cumsum(axis=1))
    batch = run_tandem(est, prd, x)
    for i in range(3):
        single = run_tandem(est, prd, x[i])
        np.testing.assert_array_equal(batch.estimates[i], single.estimates)


def test_estimator_reference_option():
    est, prd = design_fir(8, 2, 0), design_fir(8, 2, 0, -1)
    out = run_tandem(est, prd, wrap(_ramp(0.1, 60)), unwrap_with="estimator")
    np.testing.assert_allclose(out.unwrapped, _ramp(0.1, 60), atol=1e-9)
    with pytest.raises(ValueError):
        TandemFilter(est, prd, unwrap_with="oracle")


def test_step_interface():
    est, prd = design_fir(8, 2, 0), design_fir(8, 2, 0, -1)
    tf = TandemFilter(est, prd)
    with pytest.raises(RuntimeError):
        tf.step(0.0)
    tf.init(3.0)
    y, x_hat, x_bar = tf.step(3.0 - 2 * np.pi)
    assert x_bar == pytest.approx(3.0)
    with pytest.raises(ValueError):
        tf.step(np.nan)


def test_fir_tandem_returns_pair():
    est, prd = design_fir(8, 1, 0), design_fir(8, 1, 0)
    y, p = run_fir_tandem(est, prd, np.ones(10))
    np.testing.assert_allclose(y, 1.0)
    np.testing.assert_allclose(p, 1.0)


def test_non_finite_input_rejected():
    est, prd = design_fir(8, 2, 0), design_fir(8, 2, 0, -1)
    with pytest.raises(ValueError):
        run_tandem(est, prd, np.array([0.0, np.inf, 1.0]))
