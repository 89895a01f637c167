"""Radar waveform parameters, module presets, and frequency/range bookkeeping.

All range math in this package goes through the three functions below so that
the bin <-> frequency <-> range mapping is consistent everywhere: a sampled
beat tone at ``beat_frequency(cfg, r)`` lands on the FFT bin whose
``range_axis`` entry is ``r``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

C_LIGHT = 299_792_458.0  # speed of light [m/s]


class RadarConfigError(ValueError):
    """Raised when chirp/waveform parameters are inconsistent."""


class OutOfRangeError(ValueError):
    """Raised when a requested range exceeds the unambiguous limit."""


@dataclass(frozen=True)
class RadarConfig:
    """Chirp and waveform parameters of one FMCW radar module.

    Attributes:
        carrier_hz: carrier frequency [Hz]
        bandwidth_hz: swept bandwidth [Hz]
        chirp_time_s: chirp (sweep) duration [s]
        sample_rate_hz: baseband ADC rate [Hz]
        samples_per_chirp: samples recorded within one chirp
        chirp_interval_s: slow-time spacing between chirp starts [s]
        beam_aperture_deg: antenna 3 dB aperture [deg]
        snr_ref_db: post-FFT SNR of a unit-reflectivity target at 1 m [dB]
    """

    carrier_hz: float
    bandwidth_hz: float
    chirp_time_s: float
    sample_rate_hz: float
    samples_per_chirp: int
    chirp_interval_s: float
    beam_aperture_deg: float = 3.0
    snr_ref_db: float = 30.0

    def __post_init__(self):
        if self.bandwidth_hz <= 0:
            raise RadarConfigError(f"bandwidth must be positive, got {self.bandwidth_hz}")
        if self.chirp_time_s <= 0:
            raise RadarConfigError(f"chirp time must be positive, got {self.chirp_time_s}")
        if self.sample_rate_hz <= 0:
            raise RadarConfigError(f"sample rate must be positive, got {self.sample_rate_hz}")
        if self.carrier_hz <= 0:
            raise RadarConfigError(f"carrier must be positive, got {self.carrier_hz}")
        if self.samples_per_chirp < 1:
            raise RadarConfigError("samples_per_chirp must be >= 1")
        # can't sample beyond the chirp (tiny slack for float rounding)
        if self.samples_per_chirp > self.sample_rate_hz * self.chirp_time_s * (1 + 1e-12):
            raise RadarConfigError(
                f"{self.samples_per_chirp} samples do not fit into a "
                f"{self.chirp_time_s * 1e6:.1f} us chirp at {self.sample_rate_hz:.3g} Hz"
            )
        if self.chirp_interval_s < self.chirp_time_s:
            raise RadarConfigError("chirp interval must be >= chirp time")

    @property
    def wavelength_m(self) -> float:
        return C_LIGHT / self.carrier_hz

    @property
    def slow_rate_hz(self) -> float:
        """Chirp repetition rate (slow-time sample rate) [Hz]."""
        return 1.0 / self.chirp_interval_s

    @property
    def max_unambiguous_range_m(self) -> float:
        """Range whose beat frequency reaches half the ADC rate [m]."""
        return self.sample_rate_hz * self.chirp_time_s * C_LIGHT / (4.0 * self.bandwidth_hz)


def range_resolution(config: RadarConfig) -> float:
    """Range resolution c / (2 B) of the swept bandwidth [m]."""
    if config.bandwidth_hz <= 0:
        raise RadarConfigError(f"bandwidth must be positive, got {config.bandwidth_hz}")
    return C_LIGHT / (2.0 * config.bandwidth_hz)


def beat_frequency(config: RadarConfig, range_m: float) -> float:
    """Beat frequency of a reflector at the given range [Hz].

    Standard FMCW mapping: the round-trip delay 2R/c times the sweep slope
    B/T_c.  Raises OutOfRangeError beyond the unambiguous limit.
    """
    if range_m < 0 or range_m > config.max_unambiguous_range_m:
        raise OutOfRangeError(
            f"range {range_m:.3f} m outside [0, "
            f"{config.max_unambiguous_range_m:.3f}] m unambiguous span"
        )
    return 2.0 * config.bandwidth_hz * range_m / (C_LIGHT * config.chirp_time_s)


def range_axis(config: RadarConfig, fft_len: int) -> np.ndarray:
    """Range of each positive-frequency FFT bin for the given transform size.

    Bin k sits at frequency k * sample_rate / fft_len, which maps back to
    range through the inverse of `beat_frequency`.  Returns fft_len // 2
    values [m].
    """
    if fft_len < config.samples_per_chirp:
        raise ValueError(
            f"fft_len {fft_len} shorter than frame ({config.samples_per_chirp} samples)"
        )
    bin_hz = config.sample_rate_hz / fft_len
    meters_per_hz = C_LIGHT * config.chirp_time_s / (2.0 * config.bandwidth_hz)
    return np.arange(fft_len // 2) * (bin_hz * meters_per_hz)


@dataclass(frozen=True)
class ModulePreset:
    """A named radar module with its waveform parameters."""

    name: str
    config: RadarConfig


# Simulation timing: the ADC fills the 256 us chirp exactly (N = f_s T_c),
# so bin spacing equals the range resolution; 1 ms interval = 1000 chirps/s.
# The wider-band module needs twice the ADC rate for the same reason the
# narrow one gets away with 2 MHz: the unambiguous range f_s T_c c / (4B)
# must cover the >4 m distances the module is rated for.
RADAR_120G = ModulePreset(
    "RADAR_120G",
    RadarConfig(carrier_hz=120e9, bandwidth_hz=6e9, beam_aperture_deg=3.0,
                snr_ref_db=30.0, chirp_time_s=256e-6, sample_rate_hz=2e6,
                samples_per_chirp=512, chirp_interval_s=1e-3),
)

RADAR_94G = ModulePreset(
    "RADAR_94G",
    RadarConfig(carrier_hz=94e9, bandwidth_hz=14e9, beam_aperture_deg=11.0,
                snr_ref_db=42.0, chirp_time_s=256e-6, sample_rate_hz=4e6,
                samples_per_chirp=1024, chirp_interval_s=1e-3),
)

PRESETS: dict[str, ModulePreset] = {p.name: p for p in (RADAR_120G, RADAR_94G)}


def get_preset(name: str) -> RadarConfig:
    """Look up a module preset by name."""
    try:
        return PRESETS[name].config
    except KeyError:
        raise ValueError(
            f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}"
        ) from None
