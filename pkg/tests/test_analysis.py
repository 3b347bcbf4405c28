import csv
import io
import json
import math

import numpy as np
import pytest
from scipy.signal import group_delay as scipy_group_delay

from phasefilt.analysis import (
    dc_group_delay,
    expected_variance,
    freq_response,
    group_delay,
    noise_gain_table,
    noise_gains,
    noise_gains_frequency,
    phase_linearity_deviation,
    response_report,
)
from phasefilt.fir import design_fir
from phasefilt.iir import design_iir


@pytest.fixture(scope="module")
def d2():
    return design_iir(5, 1 / 64, K1=2, K0=3)


def test_freq_response_is_dtft():
    f = design_fir(10, 2, 1)
    w = np.linspace(0, np.pi, 9)
    direct = np.exp(-1j * np.outer(w, np.arange(10))) @ f.h
    np.testing.assert_allclose(freq_response(f, w), direct, atol=1e-14)


def test_group_delay_matches_scipy(d2):
    w = np.linspace(0.01, 1.0, 40)
    _, ref = scipy_group_delay((d2.b, d2.a), w=w)
    np.testing.assert_allclose(group_delay(d2, w), ref, rtol=1e-7, atol=1e-7)


def test_dc_group_delay_matches_phase_slope(d2):
    eps = 1e-5
    slope = -np.angle(freq_response(d2, [eps]))[0] / eps
    assert dc_group_delay(d2) == pytest.approx(slope, rel=1e-6)
    assert dc_group_delay(d2) == pytest.approx(d2.q, abs=1e-4)


def test_noise_gains_table1_a1():
    v_lpf, v_bpf = noise_gains(design_fir(64, 1, 0), 1)
    assert v_lpf == pytest.approx(1 / 64)
    # two non-zero taps of 1/64 at the ends of the differenced window
    assert v_bpf == pytest.approx(2 / 64**2)


@pytest.mark.parametrize("K0_tilde", range(4))
def test_parseval(d2, K0_tilde):
    t = noise_gains(d2, K0_tilde)
    f = noise_gains_frequency(d2, K0_tilde)
    np.testing.assert_allclose(f, t, rtol=1e-8)


def test_gain_table_keys():
    assert sorted(noise_gain_table(design_fir(8, 1, 0))) == [0, 1, 2, 3]


def test_expected_variance():
    assert expected_variance(1e-3, 10.0) == pytest.approx(1e-4)
    with pytest.raises(ValueError):
        expected_variance(1.0, math.inf)


def test_rectangular_first_null():
    f = design_fir(64, 1, 0)
    H = freq_response(f, 2 * np.pi * np.array([1 / 64, 0.5 / 64]))
    assert abs(H[0]) < 1e-14
    assert abs(H[1]) > 0.5


def test_linear_phase_fir_has_zero_deviation():
    _, dev, worst = phase_linearity_deviation(design_fir(33, 2, 1))
    assert worst < 1e-9
    assert dev.shape == (256,)


def test_passband_deviation_below_three_degrees(d2):
    assert phase_linearity_deviation(d2)[2] < 3.0


def test_report_csv_and_summary(d2):
    rep = response_report(d2, n_grid=65)
    rows = list(csv.DictReader(io.StringIO(rep.to_csv())))
    assert list(rows[0]) == ["f", "re", "im", "mag2", "phase_deg", "dev_deg", "mag2_db", "group_delay"]
    assert float(rows[0]["f"]) == 0.0
    assert float(rows[-1]["f"]) == 0.5
    assert float(rows[0]["mag2"]) == pytest.approx(1.0, rel=1e-9)
    passband = [r for r in rows if r["dev_deg"]]
    assert len(passband) == 256
    assert max(abs(float(r["dev_deg"])) for r in passband) == pytest.approx(rep.max_deviation_deg)
    summary = json.loads(rep.to_json())
    assert summary["q"] == pytest.approx(39.626, abs=1e-3)
    assert set(summary["v_BPF"]) == {"0", "1", "2", "3"}


def test_predictor_group_delay_is_minus_one():
    prd = design_iir(5, 1 / 64, K1=3, K0=3, q=-1)
    rep = response_report(prd, n_grid=33)
    assert rep.group_delay[0] == pytest.approx(-1.0, abs=1e-4)
