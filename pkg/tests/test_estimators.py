import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import Pipeline
from sklearn.preprocessing import FunctionTransformer

from phasefilt.estimators import PhaseTracker, WaveformFrequencyEstimator
from phasefilt.signals import synthesize, triplet_to_spec, wrap


def test_params_round_trip():
    tr = PhaseTracker(kind="iir", f_c=1 / 32, K1=3, K0=2, q="min-cng")
    params = tr.get_params()
    assert params["f_c"] == 1 / 32 and params["q"] == "min-cng"
    twin = clone(tr)
    assert twin.get_params() == params
    tr.set_params(K0=1)
    assert tr.K0 == 1


def test_fit_sets_learned_attributes():
    tr = PhaseTracker(M=32, K1=2, K0=1).fit()
    assert tr.delay_ == 15.5
    assert tr.predictor_.q == -1
    assert set(tr.noise_gains_) == {0, 1, 2, 3}


def test_unfitted_raises():
    with pytest.raises(NotFittedError):
        PhaseTracker().transform(np.zeros(10))


def test_transform_tracks_wrapped_ramp():
    theta = 0.1 + 0.25 * np.arange(300)
    tr = PhaseTracker(M=16, K1=2, K0=1).fit()
    est = tr.transform(wrap(theta))
    n = np.arange(100, 300)
    np.testing.assert_allclose(est[n], 0.1 + 0.25 * (n - tr.delay_), atol=1e-9)
    np.testing.assert_allclose(tr.predict(wrap(theta))[n], 0.1 + 0.25 * (n + 1), atol=1e-9)


def test_two_dimensional_input_rows_independent():
    rng = np.random.default_rng(2)
    X = wrap(rng.normal(0, 0.3, (4, 80)).cumsum(axis=1))
    tr = PhaseTracker(M=8, K1=2, K0=0).fit(X)
    out = tr.transform(X)
    assert out.shape == X.shape
    np.testing.assert_array_equal(out[2], tr.transform(X[2]))


def test_non_finite_input_rejected():
    tr = PhaseTracker(M=8).fit()
    with pytest.raises(ValueError):
        tr.transform(np.array([0.0, np.nan, 0.1]))


def test_pipeline_composition():
    pipe = Pipeline([("angle", FunctionTransformer(np.angle)), ("track", PhaseTracker(M=16, K1=2, K0=1))])
    x = np.exp(1j * (0.05 * np.arange(200)))
    out = pipe.fit_transform(x[None, :])
    assert out.shape == (1, 200)
    assert out[0, -1] == pytest.approx(0.05 * (199 - 7.5), abs=1e-9)


@pytest.mark.parametrize("alpha, beta", [(1, 0), (0, 1)])
def test_frequency_estimator_on_sweep(alpha, beta):
    N = 400
    spec = triplet_to_spec((0.0, 0.05, 0.1), N)
    x = synthesize(spec)
    model = WaveformFrequencyEstimator(alpha, beta, PhaseTracker(M=32, K1=3, K0=1)).fit()
    est = model.predict(x)
    assert np.all(np.isnan(est[:1]))
    n = np.arange(100, N)
    np.testing.assert_allclose(est[n], spec.frequency(n - model.delay_), atol=1e-9)


def test_frequency_estimator_validation():
    with pytest.raises(ValueError):
        WaveformFrequencyEstimator(alpha=2).fit()
    model = WaveformFrequencyEstimator().fit()
    with pytest.raises(ValueError):
        model.predict(np.array([1.0 + 0j]))
