import csv

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from esspas.channel import FiberParams, Waveform, apply_dispersion, awgn
from esspas.dsp import (
    AlignmentError,
    RrcFilter,
    align,
    cd_compensate,
    downsample_to,
    genie_phase_correct,
    least_squares_gain,
    matched_filter_and_decimate,
    pulse_shape,
    receive_symbols,
    rrc_taps,
    transmit_waveform,
)

RS = 45e9


def qam_block(n, seed=0, levels=8):
    rng = np.random.default_rng(seed)
    a = 2 * rng.integers(0, levels, (2, n, 2)) - (levels - 1)
    return a[..., 0] + 1j * a[..., 1]


def err_db(a, b):
    return 10 * np.log10(np.sum(np.abs(a - b) ** 2) / np.sum(np.abs(b) ** 2))


# --- RRC -------------------------------------------------------------------

@pytest.mark.parametrize("span,sps", [(64, 16), (7, 3), (8, 2)])
def test_rrc_symmetric_unit_energy(span, sps):
    h = rrc_taps(0.1, span, sps)
    assert len(h) == span * sps + 1
    np.testing.assert_allclose(h, h[::-1], atol=1e-15)
    assert np.sum(h**2) == pytest.approx(1.0)


def test_rrc_rejects_bad_arguments():
    with pytest.raises(ValueError):
        rrc_taps(0.0, 10, 4)
    with pytest.raises(ValueError):
        rrc_taps(0.1, 0, 4)


def test_rrc_cascade_is_nyquist():
    rrc = RrcFilter()
    h = rrc.taps
    rc = np.convolve(h, h)
    c = len(rc) // 2
    peak = rc[c]
    isi = np.abs(rc[c % rrc.sps::rrc.sps]) / peak
    isi[c // rrc.sps] = 0
    assert isi.max() < 1e-3


def test_rrc_csv(tmp_path):
    rrc = RrcFilter(span=4, sps=4)
    path = tmp_path / "taps.csv"
    rrc.to_csv(str(path))
    rows = list(csv.DictReader(open(path)))
    assert len(rows) == 17
    np.testing.assert_allclose([float(r["tap"]) for r in rows], rrc.taps)
    assert float(rows[8]["time_symbols"]) == 0.0


def test_unit_symbol_gives_impulse_response():
    x = np.zeros((2, 1), complex)
    x[0, 0] = 1
    w = pulse_shape(x, RS, 16, RrcFilter(span=16))
    np.testing.assert_allclose(w.samples[0].real, RrcFilter(span=16).taps * 4)
    assert w.delay == RrcFilter(span=16).delay


def test_pulse_shape_rejects_low_sps():
    with pytest.raises(ValueError):
        pulse_shape(qam_block(8), RS, 1)


def test_spectrum_occupancy():
    w = pulse_shape(qam_block(8192), RS, 16)
    s = np.abs(np.fft.fft(w.samples[0])) ** 2
    f = np.abs(np.fft.fftfreq(len(s), 1 / w.sample_rate))
    inside = s[f <= 1.1 * RS / 2].sum()
    assert inside / s.sum() > 0.9999


def test_waveform_power_equals_symbol_energy():
    x = qam_block(4096)
    w = pulse_shape(x, RS, 16)
    es = np.mean(np.sum(np.abs(x) ** 2, 0))
    d = int(w.delay)
    body = w.samples[:, d:d + 4096 * 16]  # filter tails excluded
    assert np.mean(np.sum(np.abs(body) ** 2, 0)) == pytest.approx(es, rel=0.02)


# --- resampling / matched filter -------------------------------------------

def test_downsample_identity():
    w = pulse_shape(qam_block(64), RS, 4)
    assert downsample_to(w, 4) is w


def test_downsample_rejects_non_integer_ratio():
    w = pulse_shape(qam_block(64), RS, 16)
    with pytest.raises(ValueError):
        downsample_to(w, 3)


def test_downsample_preserves_inband_energy():
    w = pulse_shape(qam_block(8192), RS, 16)
    d = downsample_to(w, 2)
    ratio = 10 * np.log10(d.power / w.power)
    assert abs(ratio) < 0.1


@pytest.mark.parametrize("sps_rx", [16, 8, 2])
def test_noiseless_loopback(sps_rx):
    x = qam_block(2000)
    w = pulse_shape(x, RS, 16)
    y = matched_filter_and_decimate(downsample_to(w, sps_rx), x.shape[1])
    assert np.max(np.abs(y - x)) / np.max(np.abs(x)) < 1e-3


@pytest.mark.parametrize("span,sps", [(63, 3), (64, 3), (33, 4)])
def test_delay_bookkeeping_odd_even_taps(span, sps):
    x = qam_block(300, levels=2)
    rrc = RrcFilter(span=span, sps=sps)
    w = pulse_shape(x, RS, sps, rrc)
    y = matched_filter_and_decimate(w, x.shape[1], rrc)
    assert np.max(np.abs(y - x)) < 5e-2


def test_misalignment_rejected():
    x = qam_block(100)
    w = pulse_shape(x, RS, 4, RrcFilter(span=32))
    with pytest.raises(AlignmentError):
        matched_filter_and_decimate(w.with_samples(w.samples, delay=w.delay + 0.5), 100, RrcFilter(span=32))
    with pytest.raises(AlignmentError):
        matched_filter_and_decimate(w, 200, RrcFilter(span=32))
    with pytest.raises(AlignmentError):
        matched_filter_and_decimate(w.with_samples(w.samples, delay=-3.0), 10, RrcFilter(span=32))


def test_awgn_chain_snr():
    n = 50_000
    x = qam_block(n, seed=3)
    es = np.mean(np.abs(x) ** 2)
    snr_db = 15.0
    w = pulse_shape(x, RS, 16)
    # white noise: per-sample variance sps * Es / SNR leaves Es / SNR after the MF
    noisy = w.with_samples(awgn(w.samples, 0.0, 7, signal_power=16 * es / 10 ** (snr_db / 10)))
    y = receive_symbols(noisy, n)
    meas = 10 * np.log10(es / np.mean(np.abs(y - x) ** 2))
    assert meas == pytest.approx(snr_db, abs=0.2)


# --- CD compensation -------------------------------------------------------

def test_cd_zero_distance_identity():
    w = pulse_shape(qam_block(64), RS, 2)
    assert cd_compensate(w, FiberParams(), 0) is w


@pytest.mark.parametrize("L", [80, 800, 1600])
def test_cd_inverts_linear_propagation(L):
    f = FiberParams()
    w = transmit_waveform(qam_block(4096), RS, 2, fiber=f, distance_km=L)
    prop = w.with_samples(apply_dispersion(w.samples, w.sample_rate, f.beta2, L))
    back = cd_compensate(prop, f, L)
    assert err_db(back.samples, w.samples) < -50


def test_cd_half_steps_add_up():
    f = FiberParams()
    fs = 100e9
    t = (np.arange(8192) - 4096) / fs
    pulse = np.exp(-t**2 / (2 * (100e-12) ** 2))
    # a short Gaussian stays well inside the block after 1600 km of dispersion
    w = Waveform(np.stack([pulse, 1j * pulse]).astype(complex), fs, symbol_rate=RS)
    half = cd_compensate(cd_compensate(w, f, 800), f, 800).samples
    full = cd_compensate(w, f, 1600).samples
    assert np.max(np.abs(half - full)) < 1e-10


# --- alignment -------------------------------------------------------------

def test_genie_phase_exact():
    x = qam_block(500)
    pc = genie_phase_correct(x * np.exp(0.3j), x)
    np.testing.assert_allclose(pc.symbols, x, atol=1e-12)
    np.testing.assert_allclose(pc.phase, 0.3)
    assert genie_phase_correct(x, x).phase == pytest.approx([0, 0])


def test_genie_phase_zero_correlation_flagged():
    x = np.array([[1, 1j], [1, 1]], complex)
    y = np.array([[1j, -1], [1, 1]], complex) * np.array([[1], [1]])
    y[0] = np.array([1j, 1])  # sum y conj(x) = 1j*1 + 1*(-1j) = 0
    pc = genie_phase_correct(y, x)
    assert pc.flagged.tolist() == [True, False]
    np.testing.assert_array_equal(pc.symbols[0], y[0])
    with pytest.raises(ValueError):
        genie_phase_correct(x[:, :1], x)


def test_genie_phase_estimator_spread():
    n, snr_db, theta = 2000, 10.0, 0.3
    est = []
    for t in range(300):
        x = np.exp(2j * np.pi * np.random.default_rng(t).random(n))
        y = awgn(x * np.exp(1j * theta), snr_db, 1000 + t)
        est.append(genie_phase_correct(y, x).phase[0])
    est = np.array(est)
    snr = 10 ** (snr_db / 10)
    assert abs(est.mean() - theta) < 3 / np.sqrt(n * snr * 300)
    assert est.std() < 1 / np.sqrt(n * snr)
    assert est.std() == pytest.approx(1 / np.sqrt(2 * n * snr), rel=0.15)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.2, 5.0), st.floats(-np.pi, np.pi))
def test_align_undoes_gain_and_rotation(g, phi):
    x = qam_block(64, seed=1)
    y = align(g * np.exp(1j * phi) * x, x)
    np.testing.assert_allclose(y, x, atol=1e-9)


def test_least_squares_gain_unbiased_on_awgn():
    x = qam_block(200_000, seed=2).ravel()
    y = awgn(x, 5.0, 9, signal_power=np.mean(np.abs(x) ** 2))
    assert least_squares_gain(y, x)[0] == pytest.approx(1.0, abs=5e-3)
