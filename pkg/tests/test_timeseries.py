"""Tests for field generation, splitting, detection, g2, and the bit layer."""
import numpy as np
import pytest
from scipy import integrate, stats

from thermalqkd.errors import DeadDetectorError, DomainError
from thermalqkd.timeseries import (
    BitStream,
    DetectorTrace,
    FieldTrace,
    G2Estimate,
    SimConfig,
    apply_delay,
    ber_and_mutual_info,
    detect,
    estimate_g2,
    generate_field,
    read_field_trace,
    slice_bits,
    split_field,
    thermality_test,
    write_detector_csv,
    write_field_trace,
)

TAU_C = 1e-6


def cfg(**kw):
    base = dict(sample_rate=5e7, duration=0.02, coherence_time=TAU_C,
                mean_intensity=1.0, regime="thermal", rng_seed=7)
    base.update(kw)
    return SimConfig(**base)


# ------------------------------------------------------------------- config

def test_config_rejects_unresolved_coherence():
    # fewer than 10 samples per coherence time
    with pytest.raises(DomainError):
        cfg(sample_rate=5e6)


def test_config_rejects_subsample_window():
    with pytest.raises(DomainError):
        cfg(detector_window=1e-8)  # half a sample at 5e7


def test_config_rejects_unknown_regime():
    with pytest.raises(DomainError):
        cfg(regime="squeezed")


def test_config_rejects_nonpositive_scales():
    with pytest.raises(DomainError):
        cfg(duration=0.0)
    with pytest.raises(DomainError):
        cfg(mean_intensity=-1.0)
    with pytest.raises(DomainError):
        cfg(coherence_time=0.0)
    with pytest.raises(DomainError):
        cfg(rng_seed=-1)


# ----------------------------------------------------------- generate_field

def test_thermal_intensity_is_exponential():
    trace = generate_field(cfg(duration=0.04))
    intensity = np.abs(trace.samples) ** 2
    # decimate to ~independent samples before the KS comparison
    decimated = intensity[:: int(2 * TAU_C * 5e7)]
    assert stats.kstest(decimated, "expon").statistic < 0.01


def test_thermal_parts_are_zero_mean():
    trace = generate_field(cfg(duration=0.04))
    assert abs(trace.samples.real.mean()) < 0.02
    assert abs(trace.samples.imag.mean()) < 0.02


def test_thermal_autocorrelation_time():
    trace = generate_field(cfg(duration=0.04))
    e = trace.samples
    lags = np.arange(51)
    corr = np.array([np.mean(np.conj(e[: e.size - k]) * e[k:]).real for k in lags])
    slope = np.polyfit(lags / 5e7, np.log(corr / corr[0]), 1)[0]
    tau_fit = -1.0 / slope
    assert abs(tau_fit - TAU_C) / TAU_C < 0.05


def test_thermal_mean_intensity_matches_config():
    trace = generate_field(cfg(duration=0.04, mean_intensity=2.5))
    assert np.mean(np.abs(trace.samples) ** 2) == pytest.approx(2.5, rel=0.03)


def test_coherent_amplitude_is_constant():
    trace = generate_field(cfg(regime="coherent", duration=0.001, mean_intensity=4.0))
    assert np.all(trace.samples == 2.0)
    intensity = np.abs(trace.samples) ** 2
    assert intensity.var() / intensity.mean() ** 2 < 1e-3


def test_generate_field_deterministic():
    a = generate_field(cfg(duration=0.001))
    b = generate_field(cfg(duration=0.001))
    assert np.array_equal(a.samples, b.samples)
    c = generate_field(cfg(duration=0.001, rng_seed=8))
    assert not np.array_equal(a.samples, c.samples)


# -------------------------------------------------------------- split_field

def test_balanced_split_halves_intensity_exactly():
    trace = generate_field(cfg(duration=0.001))
    reflected, transmitted = split_field(trace, 0.5, seed=1)
    half = 0.5 * np.abs(trace.samples) ** 2
    np.testing.assert_allclose(np.abs(reflected.samples) ** 2, half, atol=1e-12)
    np.testing.assert_allclose(np.abs(transmitted.samples) ** 2, half, atol=1e-12)


def test_split_conserves_energy_per_sample():
    trace = generate_field(cfg(duration=0.001))
    total = np.abs(trace.samples) ** 2
    for eta in (0.0, 0.13, 0.5, 0.87, 1.0):
        r, t = split_field(trace, eta, seed=1)
        got = np.abs(r.samples) ** 2 + np.abs(t.samples) ** 2
        np.testing.assert_allclose(got, total, atol=1e-12)


def test_split_edges_pass_everything_one_way():
    trace = generate_field(cfg(duration=0.001))
    r, t = split_field(trace, 1.0, seed=1)
    assert np.array_equal(t.samples, trace.samples)
    assert np.all(r.samples == 0.0)
    r, t = split_field(trace, 0.0, seed=1)
    assert np.array_equal(r.samples, trace.samples)
    assert np.all(t.samples == 0.0)


def test_split_rejects_bad_eta():
    trace = generate_field(cfg(duration=0.001))
    for eta in (-0.1, 1.1):
        with pytest.raises(DomainError):
            split_field(trace, eta, seed=1)


def test_bunching_survives_splitting():
    config = cfg(duration=0.01)
    r, t = split_field(generate_field(config), 0.5, seed=2)
    ya = detect(r, config, detector_id="a")
    yb = detect(t, config, detector_id="b")
    cross = np.mean(ya.y * yb.y) / (ya.y.mean() * yb.y.mean())
    assert cross > 1.5


def test_cascade_leaves_quarter_intensity():
    trace = generate_field(cfg(duration=0.001))
    _, onward = split_field(trace, 0.5, seed=1)
    _, bob = split_field(onward, 0.5, seed=2)
    ratio = np.mean(np.abs(bob.samples) ** 2) / np.mean(np.abs(trace.samples) ** 2)
    assert ratio == pytest.approx(0.25, abs=1e-12)


def test_split_vacuum_noise_is_seeded():
    trace = generate_field(cfg(duration=0.001))
    r1, t1 = split_field(trace, 0.5, seed=3, vacuum_intensity=0.1)
    r2, t2 = split_field(trace, 0.5, seed=3, vacuum_intensity=0.1)
    assert np.array_equal(r1.samples, r2.samples)
    assert np.array_equal(t1.samples, t2.samples)
    # noise actually perturbs the arms
    assert not np.array_equal(t1.samples, np.sqrt(0.5) * trace.samples)


# -------------------------------------------------------------- apply_delay

def test_apply_delay_shifts_samples():
    trace = generate_field(cfg(duration=0.001))
    delayed = apply_delay(trace, 3 / 5e7)
    assert np.array_equal(delayed.samples, np.roll(trace.samples, 3))


def test_apply_delay_zero_is_identity():
    trace = generate_field(cfg(duration=0.001))
    assert np.array_equal(apply_delay(trace, 0.0).samples, trace.samples)


# ------------------------------------------------------------------- detect

def test_single_sample_window_returns_intensity():
    config = cfg(duration=0.001)
    trace = generate_field(config)
    out = detect(trace, config)
    np.testing.assert_array_equal(out.y, np.abs(trace.samples) ** 2)
    assert out.window == pytest.approx(1 / 5e7)


def test_slow_window_suppresses_variance():
    # oracle: window-averaged variance of an intensity with autocovariance
    # I0^2 e^(-2|t|/tau_c) is (2/T^2) * int_0^T (T - s) e^(-2 s/tau_c) ds
    t_int = 20 * TAU_C
    config = cfg(sample_rate=1e7, duration=0.2, detector_window=t_int)
    out = detect(generate_field(config), config)
    factor, _ = integrate.quad(lambda s: (t_int - s) * np.exp(-2 * s / TAU_C), 0, t_int)
    want = 2.0 * factor / t_int**2
    got = out.y.var() / out.y.mean() ** 2
    assert got == pytest.approx(want, rel=0.1)


def test_shot_noise_counts_are_poisson():
    config = cfg(regime="coherent", duration=0.002, shot_noise=True,
                 photons_per_intensity=100.0)
    out = detect(generate_field(config), config)
    counts = np.rint(out.y * 100.0)
    fano = counts.var() / counts.mean()
    assert fano == pytest.approx(1.0, abs=0.05)
    assert counts.mean() == pytest.approx(100.0, rel=0.02)


def test_electronic_noise_level():
    config = cfg(duration=0.002, electronic_noise_sd=0.3)
    quiet = detect(generate_field(cfg(duration=0.002)), cfg(duration=0.002))
    noisy = detect(generate_field(config), config)
    assert (noisy.y - quiet.y).std() == pytest.approx(0.3, rel=0.05)


def test_detection_nonnegative_before_electronic_noise():
    config = cfg(duration=0.002, shot_noise=True)
    out = detect(generate_field(config), config)
    assert np.all(out.y >= 0.0)


def test_detector_noise_keyed_by_id():
    config = cfg(duration=0.001, electronic_noise_sd=0.3)
    trace = generate_field(config)
    a1 = detect(trace, config, detector_id="a")
    a2 = detect(trace, config, detector_id="a")
    b = detect(trace, config, detector_id="b")
    assert np.array_equal(a1.y, a2.y)
    assert not np.array_equal(a1.y, b.y)


def test_detect_rejects_subsample_window():
    config = cfg(sample_rate=1e7, duration=0.05, detector_window=1e-6)
    trace = generate_field(cfg(duration=0.001))
    slow = FieldTrace(trace.samples, sample_rate=1e5, seed=0)
    with pytest.raises(DomainError):
        detect(slow, config)  # window is a tenth of a sample at 1e5


# -------------------------------------------------------------- estimate_g2

def g2_of(config, detector_id="a", max_lag=0.0):
    out = detect(generate_field(config), config, detector_id=detector_id)
    return estimate_g2(out, out, max_lag=max_lag)


def test_thermal_g2_zero_lag_near_two():
    est = g2_of(cfg(duration=0.02))
    assert est.zero_lag == pytest.approx(2.0, abs=0.1)


def test_thermal_g2_follows_lorentzian_shape():
    est = g2_of(cfg(duration=0.02), max_lag=3 * TAU_C)
    want = 1.0 + np.exp(-2.0 * est.lags / TAU_C)
    assert np.max(np.abs(est.g2 - want)) < 0.06


def test_thermal_g2_decays_to_one():
    est = g2_of(cfg(duration=0.02), max_lag=3 * TAU_C)
    far = est.g2[est.lags > 2.5 * TAU_C]
    band = 3.0 * est.stderr[est.lags > 2.5 * TAU_C]
    assert np.all(np.abs(far - 1.0) < np.maximum(band, 0.05))


def test_coherent_g2_is_exactly_one_noiseless():
    est = g2_of(cfg(regime="coherent", duration=0.01), max_lag=TAU_C)
    np.testing.assert_allclose(est.g2, 1.0, atol=1e-12)
    np.testing.assert_allclose(est.stderr, 0.0, atol=1e-12)


def test_coherent_g2_one_with_shot_noise():
    est = g2_of(cfg(regime="coherent", duration=0.01, shot_noise=True),
                max_lag=TAU_C)
    assert np.all(np.abs(est.g2 - 1.0) < 0.02)


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_thermal_g2_exceeds_coherent(seed):
    thermal = g2_of(cfg(duration=0.01, shot_noise=True, rng_seed=seed))
    coherent = g2_of(cfg(regime="coherent", duration=0.01, shot_noise=True,
                         rng_seed=seed))
    assert thermal.zero_lag > coherent.zero_lag


def test_cross_g2_matches_auto_after_split():
    config = cfg(duration=0.01)
    trace = generate_field(config)
    r, t = split_field(trace, 0.5, seed=4)
    auto = estimate_g2(detect(trace, config), detect(trace, config), 0.0)
    cross = estimate_g2(detect(r, config, detector_id="a"),
                        detect(t, config, detector_id="b"), 0.0)
    assert cross.zero_lag == pytest.approx(auto.zero_lag, abs=1e-9)


def test_cross_g2_with_large_delay_loses_correlation():
    config = cfg(duration=0.02)
    r, t = split_field(generate_field(config), 0.5, seed=5)
    late = apply_delay(t, 10 * TAU_C)
    est = estimate_g2(detect(r, config, detector_id="a"),
                      detect(late, config, detector_id="b"), 0.0)
    assert abs(est.zero_lag - 1.0) < 0.05


def test_slow_detector_residual_bunching():
    # window 100x the coherence time leaves a residual of about tau_c/T
    config = cfg(sample_rate=1e7, duration=1.0, detector_window=1e-4)
    est = g2_of(config)
    assert 3e-3 < est.zero_lag - 1.0 < 3e-2


def test_g2_rejects_long_lag():
    config = cfg(duration=0.001)
    out = detect(generate_field(config), config)
    with pytest.raises(DomainError):
        estimate_g2(out, out, max_lag=2e-4)  # beyond a tenth of the trace


def test_g2_rejects_mismatched_grids():
    config = cfg(duration=0.001)
    out = detect(generate_field(config), config)
    other = DetectorTrace(out.y[:-10], out.sample_rate, out.window, "b", TAU_C)
    with pytest.raises(DomainError):
        estimate_g2(out, other, 0.0)
    slower = DetectorTrace(out.y, 1e7, out.window, "b", TAU_C)
    with pytest.raises(DomainError):
        estimate_g2(out, slower, 0.0)


def test_g2_flags_dead_detector():
    dead = DetectorTrace(np.zeros(50_000), 5e7, 2e-8, "dead", TAU_C)
    with pytest.raises(DeadDetectorError):
        estimate_g2(dead, dead, 0.0)


def test_g2_deterministic():
    a = g2_of(cfg(duration=0.005), max_lag=TAU_C)
    b = g2_of(cfg(duration=0.005), max_lag=TAU_C)
    assert np.array_equal(a.g2, b.g2)
    assert np.array_equal(a.stderr, b.stderr)
    assert a.zero_lag == b.zero_lag


# --------------------------------------------------------------- slice_bits

def test_constant_trace_slices_to_zeros():
    flat = DetectorTrace(np.ones(5000), 5e7, 2e-8, "flat", TAU_C)
    bits = slice_bits(flat)
    assert np.all(bits.bits == 0)
    assert bits.threshold == 1.0


def test_threshold_is_trace_mean():
    config = cfg(duration=0.001)
    out = detect(generate_field(config), config)
    assert slice_bits(out).threshold == np.mean(out.y)


def test_one_bit_per_window():
    config = cfg(duration=0.001, detector_window=2e-7)  # 10 samples
    out = detect(generate_field(config), config)
    assert slice_bits(out).bits.size == out.y.size // 10


def test_identical_traces_give_zero_ber():
    config = cfg(duration=0.001)
    out = detect(generate_field(config), config)
    cmp = ber_and_mutual_info(slice_bits(out), slice_bits(out))
    assert cmp.ber == 0.0
    assert cmp.mi_bsc == 1.0


def test_independent_thermal_traces_give_half_ber():
    # coarse windows: fine-sliced exponential intensities give biased bits
    # (P(1) = 1/e), so agreement between independent streams would sit at
    # 2p(1-p) = 0.465; averaging over 20 coherence times symmetrizes them
    window = 2e-5
    config_a = cfg(sample_rate=1e7, duration=0.16, rng_seed=11,
                   detector_window=window)
    config_b = cfg(sample_rate=1e7, duration=0.16, rng_seed=12,
                   detector_window=window)
    bits_a = slice_bits(detect(generate_field(config_a), config_a))
    bits_b = slice_bits(detect(generate_field(config_b), config_b))
    cmp = ber_and_mutual_info(bits_a, bits_b)
    assert cmp.ber == pytest.approx(0.5, abs=0.02)


def test_ones_fraction_matches_exponential_tail():
    # P(I > mean) = 1/e for exponential intensities
    config = cfg(duration=0.02)
    bits = slice_bits(detect(generate_field(config), config))
    assert bits.bits.mean() == pytest.approx(np.exp(-1.0), abs=0.02)


# ------------------------------------------------------- ber_and_mutual_info

def test_complemented_stream_gives_zero_mi():
    bits = (np.arange(2000) % 2).astype(np.uint8)
    cmp = ber_and_mutual_info(bits, 1 - bits)
    assert cmp.ber == 1.0
    half = ber_and_mutual_info(bits, np.concatenate([bits[:1000], 1 - bits[1000:]]))
    assert half.ber == 0.5
    assert half.mi_bsc == pytest.approx(0.0, abs=1e-12)


def test_ber_rejects_mismatch_and_short():
    bits = np.zeros(1500, dtype=np.uint8)
    with pytest.raises(DomainError):
        ber_and_mutual_info(bits, bits[:-1])
    with pytest.raises(DomainError):
        ber_and_mutual_info(bits[:999], bits[:999])


def test_thermal_split_beats_coherent_for_key_bits():
    noise = 0.05
    streams = {}
    for regime in ("thermal", "coherent"):
        config = cfg(duration=0.02, regime=regime, shot_noise=True,
                     electronic_noise_sd=noise, detector_window=4e-6)
        r, t = split_field(generate_field(config), 0.5, seed=6)
        bits_a = slice_bits(detect(r, config, detector_id="a"))
        bits_b = slice_bits(detect(t, config, detector_id="b"))
        streams[regime] = ber_and_mutual_info(bits_a, bits_b)
    assert streams["thermal"].mi_bsc > 0.1
    assert streams["thermal"].mi_bsc > streams["coherent"].mi_bsc
    assert streams["thermal"].mi_plugin > 0.1


def test_mi_decays_with_path_delay():
    config = cfg(duration=0.02, detector_window=4e-6)
    r, t = split_field(generate_field(config), 0.5, seed=7)
    bits_a = slice_bits(detect(r, config, detector_id="a"))
    mi = []
    for delay in (0.0, 0.5 * TAU_C, TAU_C, 5 * TAU_C):
        bits_b = slice_bits(detect(apply_delay(t, delay), config, detector_id="b"))
        mi.append(ber_and_mutual_info(bits_a, bits_b).mi_bsc)
    assert mi[0] > mi[1] > mi[2] > mi[3]
    assert mi[3] < 0.01


# ---------------------------------------------------------- thermality_test

def test_thermal_chunk_passes():
    config = cfg(duration=0.002)
    out = detect(generate_field(config), config)
    assert thermality_test(out) == "thermal"


def test_coherent_chunk_fails():
    config = cfg(regime="coherent", duration=0.002, shot_noise=True)
    out = detect(generate_field(config), config)
    assert thermality_test(out) == "not-thermal"


def test_thermality_rejects_short_chunk():
    config = cfg(duration=0.002)
    out = detect(generate_field(config), config)
    stub = DetectorTrace(out.y[:400], out.sample_rate, out.window, "a", TAU_C)
    with pytest.raises(DomainError):
        thermality_test(stub)  # 8 us of data, under ten coherence times


# ----------------------------------------------------------------------- io

def test_field_trace_roundtrip(tmp_path):
    trace = generate_field(cfg(duration=0.001))
    path = tmp_path / "trace.bin"
    write_field_trace(trace, path)
    back = read_field_trace(path)
    assert np.array_equal(back.samples, trace.samples)
    assert back.sample_rate == trace.sample_rate
    assert back.seed == trace.seed


def test_field_trace_rejects_foreign_file(tmp_path):
    path = tmp_path / "junk.bin"
    path.write_bytes(b"not a trace at all, far too short header")
    with pytest.raises(DomainError):
        read_field_trace(path)


def test_field_trace_rejects_truncated_payload(tmp_path):
    trace = generate_field(cfg(duration=0.001))
    path = tmp_path / "trace.bin"
    write_field_trace(trace, path)
    path.write_bytes(path.read_bytes()[:-16])
    with pytest.raises(DomainError):
        read_field_trace(path)


def test_detector_csv_is_parseable(tmp_path):
    config = cfg(duration=0.0001)
    out = detect(generate_field(config), config, detector_id="a")
    path = tmp_path / "det.csv"
    write_detector_csv(out, path)
    lines = path.read_text().splitlines()
    assert lines[0].startswith("#")
    assert lines[1] == "t,y"
    data = np.loadtxt(lines[2:], delimiter=",")
    assert data.shape == (out.y.size, 2)
    np.testing.assert_allclose(data[:, 1], out.y, rtol=1e-10)
