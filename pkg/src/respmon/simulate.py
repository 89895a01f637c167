"""Physics-based synthesizer of complex baseband chirp frames.

A breathing subject is modelled as two scatterers inside one range cell: a
static torso plus a chest wall whose range oscillates with respiration.  The
two returns interfere, so the peak power of the target bin fluctuates with
the chest phase swing 4*pi*cos(phi)*x(t)/lambda.  A single moving scatterer
would modulate phase but barely magnitude, which is not what a power-based
monitor needs to see.

Modelling conventions:
  * Chest micro-motion is far below a range cell, so the beat tone stays at
    the nominal target range; displacement enters only through the carrier
    phase (stop-and-hop, no range migration).
  * Received target amplitude falls as (1 m / R)^2, noise power is fixed per
    radar, so a unit-reflectivity static tone obeys the post-FFT SNR law
    snr_ref_db - 40 log10(R / 1 m).
  * Aspect angle projects the displacement by cos(phi) and derates the
    return by ASPECT_DERATE_DB_PER_DEG per degree; beam-pattern effects of
    the antenna apertures are not modelled separately.
  * Clutter points are stationary tones whose amplitude is taken as
    received (no range law), so near-zero-range clutter stays testable.
Noise is complex white Gaussian, drawn from a per-chirp stream seeded with
(noise_seed, chirp_index) so frames can be synthesized in any order.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .dsp import ChirpFrame
from .radar import OutOfRangeError, RadarConfig, beat_frequency, range_resolution
from .recording import IQRecording, IQRecordingHeader

# Return loss per degree of torso rotation.  The aperture/output-power
# mechanism behind the angle limits is not quantified by the hardware specs,
# so this constant is the tunable stand-in; 0.3 dB/deg separates the two
# module presets cleanly in the comparison sweeps.
ASPECT_DERATE_DB_PER_DEG = 0.3


@dataclass(frozen=True)
class BreathingTarget:
    """A breathing subject: static torso plus moving chest-wall scatterer.

    range_m is the nominal chest range; aspect_angle_deg rotates the torso
    away from the line of sight; duty splits one breathing cycle into
    inhale/exhale/pause fractions (must sum to 1).
    """

    range_m: float
    breath_rate_hz: float = 0.25
    displacement_amp_m: float = 0.004
    aspect_angle_deg: float = 0.0
    duty: tuple[float, float, float] = (0.3, 0.45, 0.25)
    body_amplitude: float = 1.0
    chest_amplitude: float = 0.5

    def __post_init__(self):
        if self.range_m <= 0:
            raise ValueError(f"target range must be positive, got {self.range_m}")
        if not 0.0 <= self.aspect_angle_deg < 90.0:
            raise ValueError(f"aspect angle must be in [0, 90), got {self.aspect_angle_deg}")
        if not 0.05 <= self.breath_rate_hz <= 2.0:
            raise ValueError(f"breath rate must be in [0.05, 2] Hz, got {self.breath_rate_hz}")
        if not 0.0 <= self.displacement_amp_m <= 0.02:
            raise ValueError(
                f"displacement must be in [0, 20] mm, got {self.displacement_amp_m}"
            )
        if len(self.duty) != 3 or any(f < 0 for f in self.duty):
            raise ValueError(f"duty must be three non-negative fractions, got {self.duty}")
        if abs(sum(self.duty) - 1.0) > 1e-9:
            raise ValueError(f"duty fractions must sum to 1, got {self.duty}")
        if self.body_amplitude < 0 or self.chest_amplitude < 0:
            raise ValueError("scatterer amplitudes must be non-negative")
        object.__setattr__(self, "duty", tuple(float(f) for f in self.duty))


@dataclass(frozen=True)
class ClutterPoint:
    """A stationary reflector: fixed range, received amplitude, fixed phase."""

    range_m: float
    amplitude: float
    phase_rad: float = 0.0

    def __post_init__(self):
        if self.range_m < 0:
            raise ValueError("clutter range must be >= 0")
        if self.amplitude < 0:
            raise ValueError("clutter amplitude must be >= 0")


@dataclass(frozen=True)
class Scene:
    """Breathing target(s) plus static clutter over a simulated time span.

    noise_seed None disables receiver noise entirely (oracle mode).
    """

    targets: tuple[BreathingTarget, ...] = ()
    clutter: tuple[ClutterPoint, ...] = ()
    noise_seed: int | None = 0
    duration_s: float = 60.0

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))
        object.__setattr__(self, "clutter", tuple(self.clutter))
        if self.duration_s <= 0:
            raise ValueError(f"duration must be positive, got {self.duration_s}")


def scene_to_dict(scene: Scene) -> dict:
    return {
        "targets": [dataclasses.asdict(t) for t in scene.targets],
        "clutter": [dataclasses.asdict(c) for c in scene.clutter],
        "noise_seed": scene.noise_seed,
        "duration_s": scene.duration_s,
    }


def scene_from_dict(d: dict) -> Scene:
    known = {"targets", "clutter", "noise_seed", "duration_s"}
    unknown = set(d) - known
    if unknown:
        raise ValueError(f"unknown scene keys: {sorted(unknown)}")
    targets = tuple(
        BreathingTarget(**{**t, "duty": tuple(t["duty"])}) if "duty" in t else BreathingTarget(**t)
        for t in d.get("targets", ())
    )
    clutter = tuple(ClutterPoint(**c) for c in d.get("clutter", ()))
    return Scene(
        targets=targets,
        clutter=clutter,
        noise_seed=d.get("noise_seed", 0),
        duration_s=d.get("duration_s", 60.0),
    )


def _chest_scalar(target: BreathingTarget, t: float) -> float:
    period = 1.0 / target.breath_rate_hz
    t_inhale = target.duty[0] * period
    t_exhale = target.duty[1] * period
    u = t % period
    amp = target.displacement_amp_m
    if u < t_inhale:
        return 0.5 * amp * (1.0 - math.cos(math.pi * u / t_inhale))
    if u < t_inhale + t_exhale:
        return 0.5 * amp * (1.0 + math.cos(math.pi * (u - t_inhale) / t_exhale))
    return 0.0


def chest_displacement(target: BreathingTarget, t) -> np.ndarray | float:
    """Chest-wall displacement at time t (scalar or array) [m].

    Piecewise raised cosine: rises 0 -> amplitude over the inhale fraction,
    falls back over the exhale fraction, holds 0 during the pause.  The
    waveform is continuous and once-differentiable at every segment join.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("time must be >= 0")
    if t_arr.ndim == 0:
        return _chest_scalar(target, float(t_arr))
    period = 1.0 / target.breath_rate_hz
    t_inhale = target.duty[0] * period
    t_exhale = target.duty[1] * period
    u = np.mod(t_arr, period)
    x = np.zeros_like(u)
    amp = target.displacement_amp_m
    if t_inhale > 0:
        m = u < t_inhale
        x[m] = 0.5 * amp * (1.0 - np.cos(np.pi * u[m] / t_inhale))
    if t_exhale > 0:
        m = (u >= t_inhale) & (u < t_inhale + t_exhale)
        x[m] = 0.5 * amp * (1.0 + np.cos(np.pi * (u[m] - t_inhale) / t_exhale))
    return x


@dataclass(frozen=True)
class _TargetTerms:
    target: BreathingTarget
    tone: np.ndarray          # fast-time beat tone at the nominal range
    body_coef: complex        # received static-scatterer phasor
    chest_scale: float        # received chest-scatterer amplitude
    phase_base: float         # 4 pi r / lambda at the nominal range
    phase_per_meter: float    # 4 pi cos(phi) / lambda


@dataclass(frozen=True)
class _ScenePrecomp:
    n_chirps: int
    targets: tuple[_TargetTerms, ...]
    static_sum: np.ndarray    # clutter tones, summed once
    noise_scale: float        # per-component std of the complex noise


@lru_cache(maxsize=8)
def _precompute(config: RadarConfig, scene: Scene) -> _ScenePrecomp:
    n = config.samples_per_chirp
    t_fast = np.arange(n) / config.sample_rate_hz
    lam = config.wavelength_m
    res = range_resolution(config)

    ranges = [t.range_m for t in scene.targets]
    for i in range(len(ranges)):
        for j in range(i + 1, len(ranges)):
            if abs(ranges[i] - ranges[j]) < res:
                raise ValueError(
                    f"targets at {ranges[i]} m and {ranges[j]} m fall in the same "
                    f"{res:.4f} m range cell"
                )

    terms = []
    for tgt in scene.targets:
        f_b = beat_frequency(config, tgt.range_m)  # raises beyond unambiguous range
        tone = np.exp(2j * np.pi * f_b * t_fast)
        atten = (1.0 / tgt.range_m) ** 2
        derate = 10.0 ** (-ASPECT_DERATE_DB_PER_DEG * tgt.aspect_angle_deg / 20.0)
        phase_base = 4.0 * np.pi * tgt.range_m / lam
        scale = atten * derate
        terms.append(
            _TargetTerms(
                target=tgt,
                tone=tone,
                body_coef=tgt.body_amplitude * scale * np.exp(1j * phase_base),
                chest_scale=tgt.chest_amplitude * scale,
                phase_base=phase_base,
                phase_per_meter=4.0 * np.pi * math.cos(math.radians(tgt.aspect_angle_deg)) / lam,
            )
        )

    static_sum = np.zeros(n, dtype=complex)
    for cl in scene.clutter:
        f_b = beat_frequency(config, cl.range_m)
        phase = 4.0 * np.pi * cl.range_m / lam + cl.phase_rad
        static_sum += cl.amplitude * np.exp(1j * (2.0 * np.pi * f_b * t_fast + phase))

    # unit tone at 1 m, rectangular FFT: SNR = N / sigma^2 = 10^(snr_ref/10)
    sigma_sq = n * 10.0 ** (-config.snr_ref_db / 10.0)
    noise_scale = math.sqrt(sigma_sq / 2.0)

    n_chirps = int(round(scene.duration_s / config.chirp_interval_s))
    return _ScenePrecomp(n_chirps, tuple(terms), static_sum, noise_scale)


def _synth_block(
    config: RadarConfig, scene: Scene, pre: _ScenePrecomp, start: int, count: int
) -> np.ndarray:
    """count frames starting at chirp `start`, as a [count, N] complex64 block.

    Single code path for synth_frame and synth_recording, so per-frame and
    batch synthesis are bit-identical.
    """
    n = config.samples_per_chirp
    buf = np.empty((count, n), dtype=complex)
    buf[:] = pre.static_sum
    interval = config.chirp_interval_s
    for term in pre.targets:
        coef = np.empty(count, dtype=complex)
        tgt = term.target
        for k in range(count):
            x = _chest_scalar(tgt, (start + k) * interval)
            ph = term.phase_base + term.phase_per_meter * x
            coef[k] = term.body_coef + term.chest_scale * complex(math.cos(ph), math.sin(ph))
        buf += coef[:, None] * term.tone[None, :]
    if scene.noise_seed is not None:
        scale = pre.noise_scale
        for k in range(count):
            rng = np.random.default_rng((scene.noise_seed, start + k))
            noise = rng.standard_normal(2 * n) * scale
            buf[k] += noise[0::2] + 1j * noise[1::2]
    return buf.astype(np.complex64)


def synth_frame(config: RadarConfig, scene: Scene, chirp_index: int) -> ChirpFrame:
    """Synthesize the complex baseband samples of one chirp.

    Deterministic given (config, scene, chirp_index); frames may be
    synthesized in any order or in parallel.
    """
    pre = _precompute(config, scene)
    if chirp_index < 0:
        raise ValueError("chirp_index must be >= 0")
    t_slow = chirp_index * config.chirp_interval_s
    if t_slow > scene.duration_s:
        raise OutOfRangeError(
            f"chirp {chirp_index} at t={t_slow:.3f}s beyond scene duration {scene.duration_s}s"
        )
    samples = _synth_block(config, scene, pre, chirp_index, 1)[0]
    return ChirpFrame(samples, chirp_index, t_slow)


def synth_recording(config: RadarConfig, scene: Scene) -> IQRecording:
    """Synthesize the whole scene into a recording with a ground-truth sidecar.

    The ground truth carries the first target's chest displacement per chirp
    (zeros for an empty scene) so tests can score estimates against it.
    """
    pre = _precompute(config, scene)
    n = pre.n_chirps
    frames = np.empty((n, config.samples_per_chirp), dtype=np.complex64)
    block = 2048  # bounds the complex128 working set
    for lo in range(0, n, block):
        hi = min(n, lo + block)
        frames[lo:hi] = _synth_block(config, scene, pre, lo, hi - lo)
    times = np.arange(n) * config.chirp_interval_s
    if scene.targets:
        tgt = scene.targets[0]
        truth = np.array([_chest_scalar(tgt, t) for t in times])
    else:
        truth = np.zeros(n)
    header = IQRecordingHeader(
        radar=config,
        n_chirps=n,
        scene=scene_to_dict(scene),
        noise_seed=scene.noise_seed,
    )
    return IQRecording(header, frames, truth_time_s=times, truth_displacement_m=truth)
