import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.constants import h as PLANCK

from esspas.channel import (
    AliasingError,
    AmplifierParams,
    FiberParams,
    Waveform,
    WdmConfig,
    apply_dispersion,
    awgn,
    brickwall,
    dump_waveform,
    edfa,
    load_waveform,
    osnr_db,
    propagate_link,
    ssfm_span,
    step_schedule,
    wdm_mux,
    wdm_select,
)

FS = 180e9


def smooth_field(n=4096, power=5e-3, bandwidth=40e9, seed=0):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((2, n)) + 1j * rng.standard_normal((2, n))
    x = brickwall(x, FS, bandwidth)
    return Waveform(x * np.sqrt(power / np.mean(np.sum(np.abs(x) ** 2, 0))), FS)


def err_db(a, b):
    return 10 * np.log10(np.sum(np.abs(a - b) ** 2) / np.sum(np.abs(b) ** 2))


# --- waveform / awgn -------------------------------------------------------

def test_waveform_invariants():
    with pytest.raises(ValueError):
        Waveform(np.zeros(4), FS)
    with pytest.raises(ValueError):
        Waveform(np.zeros((2, 4)), 0)


def test_waveform_dump_roundtrip(tmp_path):
    w = smooth_field(256)
    path = str(tmp_path / "w.bin")
    dump_waveform(w, path)
    back = load_waveform(path)
    np.testing.assert_allclose(back.samples, w.samples, rtol=1e-6, atol=1e-9)
    assert back.sample_rate == w.sample_rate
    raw = np.fromfile(path, dtype="<c8")
    assert raw[1] == np.complex64(w.samples[1, 0])  # X then Y interleaved


def test_awgn_infinite_snr_identity():
    x = np.arange(5) + 1j
    np.testing.assert_array_equal(awgn(x, np.inf, 0), x)


def test_awgn_measured_snr():
    rng = np.random.default_rng(1)
    x = np.exp(2j * np.pi * rng.random(10**6))
    y = awgn(x, 10.0, 3)
    snr = 10 * np.log10(1 / np.mean(np.abs(y - x) ** 2))
    assert snr == pytest.approx(10.0, abs=0.1)


def test_awgn_deterministic():
    x = np.ones(100, dtype=complex)
    np.testing.assert_array_equal(awgn(x, 5, 42), awgn(x, 5, 42))


# --- fiber -----------------------------------------------------------------

def test_beta2_value():
    # D = 17 ps/nm/km at 1550 nm -> about -21.7 ps^2/km
    assert FiberParams().beta2 * 1e24 == pytest.approx(-21.68, abs=0.01)


def test_step_schedule_covers_span():
    f = FiberParams(span_length=1.05)
    s = step_schedule(f, 0.1)
    assert len(s) == 11 and s.sum() == pytest.approx(1.05)
    s2 = step_schedule(FiberParams(), 5.0, nl_phase_max=0.005, power_w=2e-3)
    assert s2.sum() == pytest.approx(80.0)
    assert (np.diff(s2[:-1]) >= -1e-12).all()  # steps grow as power decays
    with pytest.raises(ValueError):
        step_schedule(f, 0.0)


def test_linear_lossless_inverted_by_dispersion():
    w = smooth_field()
    f = FiberParams(alpha=0, gamma_nl=0, span_length=80)
    out = ssfm_span(w, f, 1.0)
    back = apply_dispersion(out.samples, FS, -f.beta2, 80)
    assert err_db(back, w.samples) < -50


def test_nonlinear_step_is_pure_phase():
    w = smooth_field(1024, power=0.1)
    f = FiberParams(alpha=0, D=0, span_length=10)
    out = ssfm_span(w, f, 0.5)
    np.testing.assert_allclose(np.abs(out.samples), np.abs(w.samples), rtol=1e-10)
    assert out.energy == pytest.approx(w.energy, rel=1e-10)


def test_gaussian_pulse_broadening():
    fs = 2e12
    n = 1 << 14
    t = (np.arange(n) - n / 2) / fs
    T0 = 5e-12
    pulse = np.exp(-t**2 / (2 * T0**2))
    w = Waveform(np.stack([pulse, 0 * pulse]), fs)
    f = FiberParams(alpha=0, gamma_nl=0, span_length=2.0)
    out = ssfm_span(w, f, 0.1)

    def rms(e):
        p = np.abs(e) ** 2
        mu = np.sum(t * p) / p.sum()
        return np.sqrt(np.sum((t - mu) ** 2 * p) / p.sum())

    LD = T0**2 / abs(f.beta2)
    expected = rms(pulse) * np.sqrt(1 + (2.0 / LD) ** 2)
    assert rms(out.samples[0]) == pytest.approx(expected, rel=0.01)


@settings(max_examples=5, deadline=None)
@given(st.floats(0.1, 10.0))
def test_linear_channel_commutes_with_scaling(scale):
    w = smooth_field(512)
    f = FiberParams(gamma_nl=0)
    a = ssfm_span(w.with_samples(w.samples * scale), f, 10.0).samples
    b = ssfm_span(w, f, 10.0).samples * scale
    np.testing.assert_allclose(a, b, rtol=1e-9, atol=1e-15)


def test_ssfm_rejects_bad_step():
    with pytest.raises(ValueError):
        ssfm_span(smooth_field(64), FiberParams(), -1.0)


def test_complex64_close_to_complex128():
    w = smooth_field(2048)
    f = FiberParams()
    a = ssfm_span(w, f, 5.0, dtype=np.complex64).samples
    b = ssfm_span(w, f, 5.0).samples
    assert err_db(a, b) < -60


# --- amplifier -------------------------------------------------------------

def test_edfa_noiseless_gain():
    w = smooth_field(256)
    out = edfa(w, AmplifierParams(gain=16, noise=False), 0)
    np.testing.assert_allclose(out.samples, w.samples * 10 ** 0.8)


def test_edfa_unit_gain_adds_no_noise():
    w = smooth_field(256)
    np.testing.assert_allclose(edfa(w, AmplifierParams(gain=0), 0).samples, w.samples)


def test_edfa_noise_power():
    amp = AmplifierParams()
    w = Waveform(np.zeros((2, 200_000), complex), FS)
    out = edfa(w, amp, 3)
    nsp = 10 ** 0.5 / 2
    psd = (10**1.6 - 1) * PLANCK * w.center_frequency * nsp
    per_pol = np.mean(np.abs(out.samples) ** 2, axis=1)
    np.testing.assert_allclose(per_pol, psd * FS, rtol=0.02)


def test_single_span_osnr_matches_formula():
    f = FiberParams()
    amp = AmplifierParams(gain=f.span_loss_db)
    w = smooth_field(1 << 15, power=1e-3)
    clean = edfa(ssfm_span(w, f, 1.0), AmplifierParams(gain=amp.gain, noise=False))
    noisy = edfa(ssfm_span(w, f, 1.0), amp, 11)
    p_sig = clean.power
    psd_meas = np.mean(np.sum(np.abs(noisy.samples - clean.samples) ** 2, 0)) / FS
    measured = 10 * np.log10(p_sig / (psd_meas * 12.5e9))
    assert measured == pytest.approx(osnr_db(p_sig, amp, w.center_frequency), abs=0.2)


def test_propagate_link_deterministic():
    w = smooth_field(512)
    f = FiberParams(span_length=20)
    a = propagate_link(w, f, 2, rng_seed=5, step_km=5)
    b = propagate_link(w, f, 2, rng_seed=5, step_km=5)
    np.testing.assert_array_equal(a.samples, b.samples)


# --- WDM -------------------------------------------------------------------

def test_wdm_config_validation():
    with pytest.raises(ValueError):
        WdmConfig(3, spacing=40e9, symbol_rate=45e9)


def test_wdm_mux_select_roundtrip():
    cfg = WdmConfig(3, 50e9, 20e9)
    fs = 200e9
    ch = smooth_field(4096, bandwidth=20e9)
    ch = Waveform(ch.samples, fs)
    empty = Waveform(np.zeros_like(ch.samples), fs)
    mux = wdm_mux([empty, ch, empty], cfg)
    out = wdm_select(mux, 1, cfg)
    assert err_db(out.samples, ch.samples) < -40


def test_wdm_single_channel_identity():
    cfg = WdmConfig(1, 50e9, 20e9)
    ch = Waveform(smooth_field(2048, bandwidth=20e9).samples, 100e9)
    out = wdm_select(wdm_mux([ch], cfg), 0, cfg)
    assert err_db(out.samples, ch.samples) < -100


def test_wdm_neighbours_rejected():
    cfg = WdmConfig(3, 50e9, 20e9)
    fs = 200e9
    chans = [Waveform(smooth_field(4096, bandwidth=20e9, seed=s).samples, fs) for s in range(3)]
    out = wdm_select(wdm_mux(chans, cfg), 1, cfg)
    assert err_db(out.samples, chans[1].samples) < -40


def test_wdm_aliasing_check():
    cfg = WdmConfig(11, 50e9, 45e9)
    w = Waveform(np.zeros((2, 16), complex), 180e9)
    with pytest.raises(AliasingError):
        wdm_mux([w] * 11, cfg)
    assert cfg.center_index == 5
