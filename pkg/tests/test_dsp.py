import csv

import numpy as np
import pytest

import respmon as rm
from respmon.dsp import POWER_FLOOR_DB, ChirpFrame, RangeProfile, Waterfall
from reference_impl import fit_scale, two_scatterer_magnitude


def tone_frame(bin_index, n=512, amplitude=1.0, phase=0.0):
    k = np.arange(n)
    return ChirpFrame(amplitude * np.exp(1j * (2 * np.pi * bin_index * k / n + phase)))


def test_rectangular_window_is_identity():
    frame = tone_frame(10)
    out, gain = rm.window_apply(frame, "rectangular")
    assert gain == 1.0
    assert np.array_equal(out.samples, frame.samples)


def test_hann_window_definition():
    n = 64
    frame = ChirpFrame(np.ones(n, dtype=complex))
    out, _ = rm.window_apply(frame, "hann")
    k = np.arange(n)
    expected = 0.5 - 0.5 * np.cos(2 * np.pi * k / (n - 1))
    assert np.allclose(out.samples.real, expected, rtol=0, atol=1e-15)


def test_hann_coherent_gain():
    frame = ChirpFrame(np.ones(512, dtype=complex))
    _, gain = rm.window_apply(frame, "hann")
    # mean of the taper; 0.5 - 0.5/N for the symmetric hann
    assert gain == pytest.approx(0.4990234375, rel=1e-12)
    assert abs(gain - 0.5) < 1e-2


def test_window_rejects_empty_and_unknown():
    with pytest.raises(ValueError):
        rm.window_apply(ChirpFrame(np.empty(0, dtype=complex)))
    with pytest.raises(ValueError):
        rm.window_apply(tone_frame(3), "blackman")


def test_range_fft_tone_peaks_at_bin():
    for kind in ("rectangular", "hann"):
        frame, _ = rm.window_apply(tone_frame(80), kind)
        profile = rm.range_fft(frame)
        assert np.argmax(profile.power_db) == 80


def test_range_fft_zero_frame():
    profile = rm.range_fft(ChirpFrame(np.zeros(512, dtype=complex)))
    assert np.all(profile.complex_bins == 0)
    assert np.all(profile.power_db == POWER_FLOOR_DB)


def test_range_fft_parseval_and_half_spectrum():
    rng = np.random.default_rng(11)
    x = rng.standard_normal(512) + 1j * rng.standard_normal(512)
    frame = ChirpFrame(x)
    fft_len = 1024
    profile = rm.range_fft(frame, fft_len)
    full = np.fft.fft(x, fft_len)
    assert np.array_equal(profile.complex_bins, full[: fft_len // 2])
    energy_time = np.sum(np.abs(x) ** 2)
    energy_freq = np.sum(np.abs(full) ** 2) / fft_len
    assert energy_freq == pytest.approx(energy_time, rel=1e-6)


def test_range_fft_round_trip():
    rng = np.random.default_rng(12)
    x = rng.standard_normal(512) + 1j * rng.standard_normal(512)
    padded = np.concatenate([x, np.zeros(512, dtype=complex)])
    full = np.fft.fft(x, 1024)
    assert np.allclose(np.fft.ifft(full), padded, rtol=0, atol=1e-9 * np.abs(x).max())


def test_range_fft_linearity_and_argmax_invariance():
    rng = np.random.default_rng(13)
    x = rng.standard_normal(512) + 1j * rng.standard_normal(512)
    x += 10 * np.exp(2j * np.pi * 40 * np.arange(512) / 512)
    p1 = rm.range_fft(ChirpFrame(x))
    for a in (0.01, 3.7, 250.0):
        p2 = rm.range_fft(ChirpFrame(a * x))
        assert np.allclose(p2.complex_bins, a * p1.complex_bins, rtol=1e-9)
        assert np.argmax(p2.power_db) == np.argmax(p1.power_db)


def test_range_fft_power_db_matches_bins():
    rng = np.random.default_rng(14)
    x = rng.standard_normal(256) + 1j * rng.standard_normal(256)
    profile = rm.range_fft(ChirpFrame(x))
    expected = 20 * np.log10(np.abs(profile.complex_bins))
    assert np.allclose(profile.power_db, expected, atol=1e-9)


def test_range_fft_rejects_bad_lengths():
    frame = tone_frame(5, n=512)
    with pytest.raises(ValueError):
        rm.range_fft(frame, 500)  # not a power of two
    with pytest.raises(ValueError):
        rm.range_fft(frame, 256)  # shorter than the frame


def test_waterfall_push_and_eviction():
    wf = Waterfall(capacity=3)
    for i in range(5):
        wf.push(RangeProfile(np.ones(8, dtype=complex), i, i * 1e-3))
    assert len(wf) == 3
    assert wf.times()[0] == pytest.approx(2e-3)
    with pytest.raises(ValueError):
        wf.push(RangeProfile(np.ones(8, dtype=complex), 1, 1e-3))  # non-monotonic


def test_waterfall_single_push():
    wf = Waterfall(capacity=4)
    wf.push(RangeProfile(np.ones(8, dtype=complex), 0, 0.0))
    assert len(wf) == 1


def test_waterfall_slice_reproduces_two_scatterer_magnitude(cfg94):
    scene = rm.Scene(
        targets=(rm.BreathingTarget(range_m=2.0, breath_rate_hz=0.3),),
        noise_seed=None,
        duration_s=4.0,
    )
    wf = Waterfall(capacity=4000)
    for i in range(4000):
        frame = rm.synth_frame(cfg94, scene, i)
        tapered, _ = rm.window_apply(frame)
        wf.push(rm.range_fft(tapered))
    target_bin = int(np.argmax(wf.profiles()[0].power_db))
    measured = wf.bin_magnitude(target_bin)
    expected = two_scatterer_magnitude(scene.targets[0], cfg94.wavelength_m, wf.times())
    k = fit_scale(measured, expected)
    rel_rms = np.sqrt(np.mean((measured - k * expected) ** 2)) / measured.mean()
    assert rel_rms < 1e-6


def test_waterfall_csv_export(tmp_path):
    wf = Waterfall(capacity=10)
    rng = np.random.default_rng(5)
    for i in range(6):
        wf.push(RangeProfile(rng.standard_normal(16) + 1j * rng.standard_normal(16), i, i * 0.5))
    path = tmp_path / "wf.csv"
    wf.write_csv(path)
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0][0] == "t_slow"
    assert len(rows) == 7
    assert len(rows[1]) == 17
    mat = wf.power_matrix()
    assert float(rows[1][1]) == pytest.approx(mat[0, 0], abs=1e-3)
