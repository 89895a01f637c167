import pytest

import respmon as rm


@pytest.fixture(scope="session")
def cfg120():
    return rm.get_preset("RADAR_120G")


@pytest.fixture(scope="session")
def cfg94():
    return rm.get_preset("RADAR_94G")


@pytest.fixture(scope="session")
def oracle_scene():
    """Noise-free two-scatterer breathing scene, 60 s at 2 m."""
    return rm.Scene(
        targets=(rm.BreathingTarget(range_m=2.0, breath_rate_hz=0.25),),
        noise_seed=None,
        duration_s=60.0,
    )


@pytest.fixture(scope="session")
def oracle_recording(cfg94, oracle_scene):
    return rm.synth_recording(cfg94, oracle_scene)


@pytest.fixture(scope="session")
def oracle_trace(oracle_recording):
    return rm.process_recording(oracle_recording)


@pytest.fixture(scope="session")
def noisy_scene():
    """Breathing subject at 2 m with light clutter and receiver noise, 40 s."""
    return rm.Scene(
        targets=(rm.BreathingTarget(range_m=2.0, breath_rate_hz=0.25),),
        clutter=(rm.ClutterPoint(0.8, 0.05), rm.ClutterPoint(4.5, 0.03, 1.0)),
        noise_seed=7,
        duration_s=40.0,
    )


@pytest.fixture(scope="session")
def noisy_recording(cfg94, noisy_scene):
    return rm.synth_recording(cfg94, noisy_scene)


@pytest.fixture(scope="session")
def noisy_trace(noisy_recording):
    return rm.process_recording(noisy_recording)


def make_profiles(config, scene, n_chirps, window="hann"):
    """(RangeProfile, detections) pairs for tracker-level tests."""
    axis = rm.range_axis(config, config.samples_per_chirp)
    cfar_cfg = rm.CfarConfig()
    pairs = []
    for i in range(n_chirps):
        frame = rm.synth_frame(config, scene, i)
        tapered, _ = rm.window_apply(frame, window)
        profile = rm.range_fft(tapered)
        pairs.append((profile, rm.ca_cfar(profile, cfar_cfg, axis)))
    return pairs
