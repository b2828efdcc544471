from fractions import Fraction

import numpy as np
import pytest

from esspas.pas import (
    FrameError,
    LabelingMap,
    LdpcCode,
    PasChain,
    UniformChain,
    compute_llrs,
    pam_priors,
    qam_assemble,
    read_alist,
    read_bits,
    write_alist,
    write_bits,
)
from esspas.pas.bitio import BitFileError
from esspas.shaping import (
    ShapingConfig,
    ShapingError,
    gamma,
    make_shaper,
    plan_rate,
    sign_bit_budget,
    uniform_info_rate,
)
from esspas.shaping.shaper import Shaper
from esspas.shaping import build_trellis


@pytest.fixture(scope="module")
def code56():
    return LdpcCode.builtin("ldpc_2400_r56")


@pytest.fixture(scope="module")
def code24():
    return LdpcCode.builtin("ldpc_24_12")


# --- labelling -------------------------------------------------------------

@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_gray_property(m):
    lab = LabelingMap(m)
    diffs = (lab.labels[1:] != lab.labels[:-1]).sum(axis=1)
    assert (diffs == 1).all()
    assert len({tuple(r) for r in lab.labels}) == 2**m


@pytest.mark.parametrize("m", [2, 3, 4])
def test_sign_flip_changes_only_sign_bit(m):
    lab = LabelingMap(m)
    for a in lab.amplitudes:
        d = lab.label_of(a) != lab.label_of(-a)
        assert d[0] and not d[1:].any()


def test_label_map_roundtrip():
    lab = LabelingMap(4)
    assert (lab.map_bits(lab.labels) == lab.points).all()
    amps = lab.amplitudes
    assert (lab.amplitudes_from_bits(lab.amplitude_bits(amps)) == amps).all()
    assert (lab.hard_decision([-20, -0.1, 0.1, 2.2, 40]) == [-15, -1, 1, 3, 15]).all()


# --- LLRs ------------------------------------------------------------------

def _prob_domain_llr(y, sigma2_real, lab, priors):
    """Direct probability-domain evaluation, no logs until the ratio."""
    out = np.zeros(lab.m)
    lik = priors * np.exp(-(y - lab.points) ** 2 / (2 * sigma2_real))
    for i in range(lab.m):
        out[i] = np.log(lik[lab.labels[:, i] == 0].sum() / lik[lab.labels[:, i] == 1].sum())
    return out


def test_llr_noiseless_limit():
    lab = LabelingMap(3)
    llr = compute_llrs(lab.points.astype(float), 1e-4, lab)
    assert ((llr > 0) == (lab.labels == 0)).all()


def test_llr_sign_bit_symmetric_at_zero():
    lab = LabelingMap(3)
    assert compute_llrs([0.0], 0.5, lab)[0, 0] == pytest.approx(0, abs=1e-12)


def test_llr_shaped_priors_against_probability_oracle():
    lab = LabelingMap(2)  # points -3, -1, 1, 3
    priors = pam_priors(lab, [0.8, 0.2])
    uniform = compute_llrs([0.0], 1.0, lab)[0]
    shaped = compute_llrs([0.0], 1.0, lab, priors)[0]
    ref = _prob_domain_llr(0.0, 0.5, lab, priors)
    np.testing.assert_allclose(shaped, ref, rtol=1e-12)
    # amplitude bit is 1 for |x| = 1; shaped priors push it further toward 1
    assert shaped[1] < uniform[1] < 0
    for y in np.linspace(-5, 5, 21):
        np.testing.assert_allclose(
            compute_llrs([y], 0.7, lab, priors)[0], np.clip(_prob_domain_llr(y, 0.35, lab, priors), -40, 40), rtol=1e-9, atol=1e-12
        )


def test_llr_consistency_with_map_decisions():
    lab = LabelingMap(2)
    priors = pam_priors(lab, [0.7, 0.3])
    rng = np.random.default_rng(3)
    idx = rng.choice(4, size=20000, p=priors)
    x = lab.points[idx]
    y = x + np.sqrt(0.5) * rng.standard_normal(x.size)
    llr = compute_llrs(y, 1.0, lab, priors)
    bits = lab.labels[idx]
    for i in range(2):
        assert llr[bits[:, i] == 0, i].mean() >= 0
    # per-bit MAP by brute force over the 4 points
    post = priors[None, :] * np.exp(-(y[:, None] - lab.points[None, :]) ** 2)
    for i in range(2):
        p0 = post[:, lab.labels[:, i] == 0].sum(1)
        p1 = post[:, lab.labels[:, i] == 1].sum(1)
        decided = np.abs(llr[:, i]) > 1e-9
        assert ((llr[:, i] > 0) == (p0 > p1))[decided].all()


def test_llr_clipped_and_finite():
    lab = LabelingMap(4)
    llr = compute_llrs([1e3, -1e3], 1e-6, lab, pam_priors(lab, [1, 0, 0, 0, 0, 0, 0, 0]))
    assert np.isfinite(llr).all() and np.abs(llr).max() <= 40


# --- LDPC ------------------------------------------------------------------

def test_alist_roundtrip(tmp_path, code24):
    path = tmp_path / "c.alist"
    write_alist(code24.H, str(path))
    np.testing.assert_array_equal(read_alist(str(path)), code24.H)


def test_alist_malformed(tmp_path):
    path = tmp_path / "bad.alist"
    path.write_text("4 2\n1 2\n1 1 1 1\n2 2\n1\n2\n1\n")
    with pytest.raises(ValueError):
        read_alist(str(path))


def test_fixture_rates(code56, code24):
    assert code56.rate == Fraction(5, 6)
    assert (code56.n, code56.k) == (2400, 2000)
    assert code24.H.shape == (12, 24)


def test_systematic_encoder(code56):
    rng = np.random.default_rng(0)
    u = rng.integers(0, 2, (8, code56.k))
    cw = code56.encode(u)
    assert code56.is_codeword(cw).all()
    np.testing.assert_array_equal(code56.extract_info(cw), u)


def test_decoder_noiseless_one_iteration(code56):
    cw = code56.encode(np.random.default_rng(1).integers(0, 2, (3, code56.k)))
    res = code56.decode(np.where(cw == 0, np.inf, -np.inf))
    assert res.converged.all() and (res.iterations == 1).all()
    np.testing.assert_array_equal(res.bits, cw)


def test_decoder_zero_llrs_not_converged(code24):
    res = code24.decode(np.zeros(24))
    assert not res.converged[0]


def test_decoder_corrects_any_single_error(code24):
    cw = code24.encode(np.random.default_rng(2).integers(0, 2, (1, code24.k)))[0]
    base = np.where(cw == 0, 20.0, -20.0)
    for i in range(code24.n):
        llr = base.copy()
        llr[i] = -llr[i]
        res = code24.decode(llr)
        assert res.converged[0], i
        np.testing.assert_array_equal(res.bits[0], cw)


# --- PAS chain -------------------------------------------------------------

def test_sign_budget_at_operating_point():
    parity, extra, signs = sign_bit_budget(4, "5/6", 3600)
    assert (parity, extra, signs) == (2400, 1200, 3600)


def test_uniform_info_rate():
    assert uniform_info_rate(3, "5/6") == Fraction(5, 2)


def _random_info(chain, symbols, seed=0):
    rng = np.random.default_rng(seed)
    return rng.integers(0, 2, chain.info_bits_for(symbols), dtype=np.uint8)


@pytest.mark.parametrize("N,kind", [(8, "ess"), (16, "ccdm"), (24, "ess"), (50, "ccdm"), (64, "ess"), (60, "ccdm")])
def test_pas_noiseless_roundtrip(code56, N, kind):
    shaper = make_shaper(plan_rate("2.5", 4, "5/6", N, shaper=kind))
    chain = PasChain(shaper, "5/6", code56)
    S = chain.symbols_for(1)
    info = _random_info(chain, S, N)
    frame = chain.transmit(info)
    assert (np.abs(frame.symbols) == frame.amplitudes).all()
    assert frame.parity_bits.size == (code56.n - code56.k) * (S // chain.frame_symbols)
    llr = np.where(frame.labels == 0, 40.0, -40.0)
    res = chain.receive_llrs(llr)
    assert res.ok
    np.testing.assert_array_equal(res.info, info)
    np.testing.assert_array_equal(chain.receive_symbols(frame.symbols).info, info)


@pytest.mark.parametrize("N", [6, 32, 64])
def test_pas_genie_roundtrip(N):
    shaper = make_shaper(plan_rate("2.5", 4, "5/6", N, shaper="ess"))
    chain = PasChain(shaper, "5/6")
    S = chain.symbols_for(500)
    info = _random_info(chain, S)
    frame = chain.transmit(info)
    assert frame.sign_bits.size == S
    assert frame.extra_bits.size == gamma(4, "5/6") * S
    np.testing.assert_array_equal(chain.receive_symbols(frame.symbols).info, info)


def test_pas_degenerate_shaper_is_uniform_16pam(code56):
    N = 10
    cfg = ShapingConfig(N=N, k=3 * N, m=4, fec_rate=Fraction(5, 6), gamma=Fraction(1, 3),
                        target_rate=Fraction(3 * N, N) + Fraction(1, 3), e_max=N * 225)
    shaper = make_shaper(cfg)
    np.testing.assert_allclose(shaper.design_distribution(), np.full(8, 1 / 8))
    chain = PasChain(shaper, "5/6", code56)
    S = chain.symbols_for(1)
    info = _random_info(chain, S, 4)
    frame = chain.transmit(info)
    # with every sequence allowed, the amplitude bits are the raw input bits
    assert frame.amplitude_bits.mean() == pytest.approx(0.5, abs=0.02)
    np.testing.assert_array_equal(chain.receive_symbols(frame.symbols).info, info)


def test_pas_corrupted_amplitude_flagged(code56):
    shaper = make_shaper(plan_rate("2.5", 4, "5/6", 20, shaper="ess"))
    chain = PasChain(shaper, "5/6", code56)
    S = chain.symbols_for(1)
    frame = chain.transmit(_random_info(chain, S))
    bad = frame.symbols.copy()
    bad[47] = np.sign(bad[47]) * 15  # energy bound of block 2 broken
    res = chain.receive_symbols(bad)
    assert not res.ok
    assert res.block_errors[0][0] == 47 // 20


def test_pas_frame_geometry_errors(code56):
    shaper = make_shaper(plan_rate("2.5", 4, "5/6", 20, shaper="ess"))
    chain = PasChain(shaper, "5/6", code56)
    with pytest.raises(FrameError):
        chain.transmit(np.zeros(chain.info_per_super + 1, dtype=np.uint8))
    with pytest.raises(ShapingError):
        PasChain(shaper, "3/4", code56)


def test_uniform_chain_roundtrip(code56):
    chain = UniformChain(3, "5/6", code56)
    S = chain.symbols_for(1000)
    info = _random_info(chain, S)
    labels, symbols = chain.transmit(info)
    assert set(np.unique(symbols)) <= set(range(-7, 8, 2))
    res = chain.receive_llrs(np.where(labels == 0, 40.0, -40.0))
    assert res.ok
    np.testing.assert_array_equal(res.info, info)
    np.testing.assert_array_equal(chain.receive_symbols(symbols).info, info)


def test_uniform_all_zero_codeword_constant_level(code56):
    chain = UniformChain(3, "5/6", code56)
    _, symbols = chain.transmit(np.zeros(code56.k, dtype=np.uint8))
    assert len(set(symbols)) == 1


def test_prior_correctness_histogram():
    tr = build_trellis((1, 3, 5, 7), 8, 8 + 8 * 20)
    shaper = Shaper("ess", 8, tr.num_bits, tr.amplitudes, trellis=tr)
    rng = np.random.default_rng(11)
    blocks = 100_000
    idx = rng.integers(0, 2**shaper.k, blocks)
    amps = np.stack([shaper.encode_index(int(i)) for i in idx])
    emp = np.array([(amps == a).mean() for a in tr.amplitudes])
    p = shaper.used_distribution()
    # block-level bound: amplitudes inside a block are dependent
    sigma = np.sqrt(p * (1 - p) / blocks)
    assert (np.abs(emp - p) <= 3 * sigma).all()


def test_qam_assemble():
    q = qam_assemble([1, -3, 5], [1, 3, -5])
    assert q.symbols[0] == 1 + 1j
    assert np.conj(q.symbols[1]) == qam_assemble([-3], [-3]).symbols[0]
    assert q.scale == pytest.approx(np.sqrt(np.mean(np.abs(q.symbols) ** 2)))
    np.testing.assert_allclose(np.mean(np.abs(q.normalized) ** 2), 1.0)
    lab = LabelingMap(4)
    grid = qam_assemble(*np.meshgrid(lab.points, lab.points))
    assert len(np.unique(grid.symbols)) == 256
    with pytest.raises(ValueError):
        qam_assemble([1], [1, 3])


def test_bit_file_roundtrip(tmp_path):
    bits = np.random.default_rng(0).integers(0, 2, 1003)
    path = str(tmp_path / "x.bits")
    write_bits(path, bits)
    np.testing.assert_array_equal(read_bits(path), bits)
    with open(path, "r+b") as fh:
        fh.truncate(50)
    with pytest.raises(BitFileError, match="offset 50"):
        read_bits(path)
