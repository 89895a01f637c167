"""Per-target slow-time power analysis and the streaming composition.

Chain per chirp: window -> range FFT -> CA-CFAR -> peak tracking ->
masked-spectrum time-domain reconstruction.  Per slow-time step the
reconstructed amplitude is impulse-thresholded, envelope-detected, and
periodically scored for respiration presence and rate.  All state is bounded
(ring buffers sized by the presence window), so the pipeline runs for
arbitrarily long streams.

Presence decision: the mean-removed envelope periodogram must show in-band
(resp_band_hz) power exceeding out-of-band power by presence_ratio_db, both
over the full presence window and over each half, with a stable in-band
fundamental between halves.  Out-of-band power excludes narrow windows at
harmonics of the detected fundamental: a periodic but non-sinusoidal
envelope is evidence for breathing, not against it.
"""

from __future__ import annotations

import csv
import math
import threading
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, NamedTuple

import numpy as np

from .cfar import CfarConfig, Detection, ca_cfar, strongest_target
from .dsp import POWER_FLOOR_DB, ChirpFrame, RangeProfile, window_taper
from .radar import RadarConfig, range_axis


class InsufficientDataError(ValueError):
    """Raised when a rate estimate is requested from too short a window."""


@dataclass(frozen=True)
class PipelineConfig:
    """Tuning of the respiration-extraction chain.

    gate_bins is the peak-tracking association gate M (chest motion is
    sub-cell, so drift beyond M bins means a different reflector);
    miss_limit is how many consecutive missed detections are coasted before
    the track is dropped.  impulse_percentile is the clip point of the
    impulse thresholder; impulse_clip optionally caps amplitudes absolutely.
    """

    gate_bins: int = 3
    miss_limit: int = 10
    impulse_percentile: float = 99.5
    impulse_clip: float | None = None
    envelope_smoothing_s: float = 0.5
    resp_band_hz: tuple[float, float] = (0.1, 0.7)
    presence_ratio_db: float = 6.0
    presence_window_s: float = 30.0
    search_gate_m: tuple[float, float] | None = None
    decision_interval_s: float = 1.0
    # cadence of the impulse-statistics refresh (amortizes the percentile scan)
    stats_interval: int = 64
    stats_decimation: int = 8

    def __post_init__(self):
        if self.gate_bins < 1:
            raise ValueError("gate_bins must be >= 1")
        if self.miss_limit < 0:
            raise ValueError("miss_limit must be >= 0")
        if not 0.0 < self.impulse_percentile <= 100.0:
            raise ValueError("impulse_percentile must be in (0, 100]")
        if self.envelope_smoothing_s <= 0:
            raise ValueError("smoothing window must be positive")
        f_lo, f_hi = self.resp_band_hz
        if not 0.0 < f_lo < f_hi:
            raise ValueError(f"respiration band must satisfy 0 < f_lo < f_hi, got {self.resp_band_hz}")
        if self.presence_window_s <= 0:
            raise ValueError("presence window must be positive")
        object.__setattr__(self, "resp_band_hz", (float(f_lo), float(f_hi)))


class TrackRecord(NamedTuple):
    t_slow: float
    bin: int
    power_db: float
    neighborhood: np.ndarray  # 2M+1 complex bins centered on the track bin
    coasted: bool


@dataclass
class PeakTrack:
    """Per-chirp records of one tracked reflector."""

    target_id: int
    gate_bins: int
    records: list[TrackRecord] = field(default_factory=list)


def _bin_power_db(profile: RangeProfile, b: int) -> float:
    v = profile.complex_bins[b]
    p = v.real**2 + v.imag**2
    if p <= 10.0 ** (POWER_FLOOR_DB / 10.0):
        return POWER_FLOOR_DB
    return 10.0 * math.log10(p)


class PeakTracker:
    """Nearest-bin association of the gated strongest detection, chirp to chirp.

    Missed detections (no detection, or one outside the association gate)
    are coasted at the last bin, recording the raw spectrum neighborhood
    anyway; after miss_limit consecutive misses the track is dropped and the
    next detection starts a fresh track.
    """

    def __init__(self, gate_bins: int = 3, miss_limit: int = 10):
        self.gate_bins = gate_bins
        self.miss_limit = miss_limit
        self.track_id: int | None = None
        self._bin: int | None = None
        self._misses = 0
        self._next_id = 0

    @property
    def active_bin(self) -> int | None:
        return self._bin

    def update(self, profile: RangeProfile, detection: Detection | None) -> TrackRecord | None:
        if detection is not None and (
            self._bin is None or abs(detection.bin - self._bin) <= self.gate_bins
        ):
            if self._bin is None:
                self.track_id = self._next_id
                self._next_id += 1
            self._bin = detection.bin
            self._misses = 0
            return self._record(profile, detection.bin, detection.power_db, coasted=False)
        if self._bin is None:
            return None
        self._misses += 1
        if self._misses > self.miss_limit:
            self._bin = None
            self.track_id = None
            return None
        return self._record(profile, self._bin, _bin_power_db(profile, self._bin), coasted=True)

    def _record(self, profile, b, power_db, coasted) -> TrackRecord:
        m = self.gate_bins
        length = len(profile.complex_bins)
        neigh = np.zeros(2 * m + 1, dtype=complex)
        lo = max(0, b - m)
        hi = min(length, b + m + 1)
        neigh[lo - (b - m) : hi - (b - m)] = profile.complex_bins[lo:hi]
        return TrackRecord(profile.t_slow, b, power_db, neigh, coasted)


def track_peak(
    stream: Iterable[tuple[RangeProfile, list[Detection]]],
    gate_bins: int = 3,
    miss_limit: int = 10,
    gate_m: tuple[float, float] | None = None,
) -> PeakTrack | None:
    """Track the strongest gated peak through a (profile, detections) stream.

    Returns the longest track observed, or None if nothing was ever detected.
    """
    tracker = PeakTracker(gate_bins, miss_limit)
    tracks: dict[int, PeakTrack] = {}
    for profile, detections in stream:
        best = strongest_target(detections, gate_m)
        rec = tracker.update(profile, best)
        if rec is not None:
            track = tracks.setdefault(tracker.track_id, PeakTrack(tracker.track_id, gate_bins))
            track.records.append(rec)
    if not tracks:
        return None
    return max(tracks.values(), key=lambda tr: len(tr.records))


@lru_cache(maxsize=8)
def _recon_offset_basis(fft_len: int, m: int) -> np.ndarray:
    # inverse-DFT rows for bin offsets -m..m, 1/fft_len normalization.  The
    # center bin's own phase ramp is unimodular and dropped: it cannot change
    # the magnitude this op returns, and leaving it out keeps the basis a
    # fixed (2m+1, fft_len) block independent of the tracked bin.
    offsets = np.arange(-m, m + 1)
    n = np.arange(fft_len)
    return np.exp(2j * np.pi * np.outer(offsets, n) / fft_len) / fft_len


def reconstruct_amplitude(record: TrackRecord, fft_len: int) -> float:
    """Peak magnitude of the fast-time signal rebuilt from the masked spectrum.

    The 2M+1 retained bins are embedded into an otherwise-zero spectrum of
    the original FFT length and inverse transformed (1/fft_len
    normalization); the maximum |signal| is the per-chirp amplitude sample.
    """
    m = (len(record.neighborhood) - 1) // 2
    lo, hi = record.bin - m, record.bin + m + 1
    neigh = record.neighborhood
    if lo < 0 or hi > fft_len // 2:
        pos = record.bin + np.arange(-m, m + 1)
        valid = (pos >= 0) & (pos < fft_len // 2)
        if not valid.any():
            return 0.0
        neigh = np.where(valid, neigh, 0.0)
    x = neigh @ _recon_offset_basis(fft_len, m)
    return float(np.abs(x).max())


class _ImpulseGate:
    """Streaming impulse thresholder.

    Keeps a decimated ring of the trailing presence window and refreshes the
    median (noise floor) and the clip percentile every stats_interval
    samples.  A sample passes only above the median and is clipped at the
    percentile, which removes high random motions and spurious spikes.
    """

    _MIN_STATS = 16

    def __init__(self, sample_rate_hz: float, cfg: PipelineConfig):
        self._pct = cfg.impulse_percentile
        self._clip_abs = cfg.impulse_clip
        self._interval = cfg.stats_interval
        self._decimation = cfg.stats_decimation
        cap = max(self._MIN_STATS, int(cfg.presence_window_s * sample_rate_hz / self._decimation))
        self._ring = deque(maxlen=cap)
        self._count = 0
        self._median = math.inf
        self._clip = math.inf

    def push(self, x: float) -> float:
        if self._count % self._decimation == 0:
            self._ring.append(x)
        if self._count % self._interval == 0 and len(self._ring) >= self._MIN_STATS:
            med, pct = np.percentile(np.asarray(self._ring), [50.0, self._pct])
            self._median = float(med)
            self._clip = float(pct) if self._clip_abs is None else min(float(pct), self._clip_abs)
        self._count += 1
        if x <= self._median:
            return 0.0
        return x if x <= self._clip else self._clip


class _EnvelopeSmoother:
    """Streaming peak-hold decay plus zero-phase moving average.

    env[i] = max(impulse[i], env[i-1] * exp(-dt/tau)) followed by a centered
    moving average of tau seconds (zero-padded edges).  The centered average
    needs half a window of lookahead, so output is emitted with that delay;
    finish() flushes the tail.
    """

    def __init__(self, sample_rate_hz: float, smoothing_s: float):
        self._decay = math.exp(-1.0 / (sample_rate_hz * smoothing_s))
        w = int(round(smoothing_s * sample_rate_hz))
        w = max(1, w) | 1  # odd length keeps the average centered
        self._w = w
        self._half = (w - 1) // 2
        self._window = deque()
        self._sum = 0.0
        self._held = 0.0
        self._pushed = 0
        self._emitted = 0

    @property
    def delay(self) -> int:
        return self._half

    def push(self, impulse: float) -> float | None:
        self._held = impulse if impulse > self._held * self._decay else self._held * self._decay
        self._window.append(self._held)
        self._sum += self._held
        if len(self._window) > self._w:
            self._sum -= self._window.popleft()
        self._pushed += 1
        if self._pushed - 1 < self._half:
            return None
        self._emitted += 1
        return self._sum / self._w

    def finish(self) -> list[float]:
        out = []
        while self._emitted < self._pushed:
            # window right edge is exhausted; trim the left edge as it moves
            j = self._emitted
            while self._window and (self._pushed - len(self._window)) < j - self._half:
                self._sum -= self._window.popleft()
            out.append(self._sum / self._w)
            self._emitted += 1
        return out


class _RingArray:
    """Fixed-capacity float ring with cheap ordered snapshots."""

    def __init__(self, capacity: int):
        self._buf = np.zeros(capacity)
        self._cap = capacity
        self._idx = 0
        self._full = False

    def append(self, value: float) -> None:
        self._buf[self._idx] = value
        self._idx += 1
        if self._idx == self._cap:
            self._idx = 0
            self._full = True

    def __len__(self) -> int:
        return self._cap if self._full else self._idx

    def snapshot(self) -> np.ndarray:
        if not self._full:
            return self._buf[: self._idx].copy()
        return np.concatenate((self._buf[self._idx :], self._buf[: self._idx]))


def threshold_impulses(
    recon_amp: np.ndarray, sample_rate_hz: float, cfg: PipelineConfig | None = None
) -> np.ndarray:
    """Batch impulse thresholding of a reconstructed-amplitude series."""
    if len(recon_amp) == 0:
        raise ValueError("empty series")
    cfg = cfg or PipelineConfig()
    gate = _ImpulseGate(sample_rate_hz, cfg)
    return np.array([gate.push(float(x)) for x in recon_amp])


def envelope_detect(
    impulses: np.ndarray, sample_rate_hz: float, smoothing_s: float = 0.5
) -> np.ndarray:
    """Batch envelope detection of an impulse series."""
    sm = _EnvelopeSmoother(sample_rate_hz, smoothing_s)
    out = [v for v in (sm.push(float(x)) for x in impulses) if v is not None]
    out.extend(sm.finish())
    return np.array(out)


def _band_metrics(
    envelope: np.ndarray,
    sample_rate_hz: float,
    band: tuple[float, float],
    max_harmonic: int = 12,
) -> tuple[float, float | None]:
    """In/out band power ratio [dB] and the in-band fundamental [Hz].

    Out-of-band power excludes narrow windows around integer multiples of
    the detected fundamental so harmonics of a non-sinusoidal rhythm do not
    count against it.
    """
    seg = envelope - envelope.mean()
    spec = np.abs(np.fft.rfft(seg)) ** 2
    freqs = np.fft.rfftfreq(len(seg), 1.0 / sample_rate_hz)
    in_band = (freqs >= band[0]) & (freqs <= band[1])
    if not in_band.any():
        return -math.inf, None
    p_in = spec[in_band].sum()
    if p_in <= 0.0:
        return -math.inf, None
    fb = freqs[in_band]
    pb = spec[in_band]
    k = int(np.argmax(pb))
    df = freqs[1] - freqs[0]
    if 0 < k < len(pb) - 1:
        den = pb[k - 1] - 2.0 * pb[k] + pb[k + 1]
        delta = 0.5 * (pb[k - 1] - pb[k + 1]) / den if den != 0 else 0.0
        delta = float(np.clip(delta, -0.5, 0.5))
    else:
        delta = 0.0
    f0 = float(fb[k] + delta * df)
    out_mask = (freqs > 0) & ~in_band
    m = 2
    while m * f0 <= freqs[-1] and m <= max_harmonic:
        out_mask &= np.abs(freqs - m * f0) > (2.0 * df + 0.02 * m * f0)
        m += 1
    p_out = spec[out_mask].sum()
    if p_out <= 0.0:
        return math.inf, f0
    return 10.0 * math.log10(p_in / p_out), f0


# maximum drift of the in-band fundamental between window halves for the
# rhythm to count as sustained [Hz]
_F0_STABILITY_HZ = 0.08


def _presence_and_rate(
    envelope: np.ndarray, sample_rate_hz: float, cfg: PipelineConfig
) -> tuple[bool, float | None]:
    ratio, f0 = _band_metrics(envelope, sample_rate_hz, cfg.resp_band_hz)
    if f0 is None or ratio < cfg.presence_ratio_db:
        return False, None
    half = len(envelope) // 2
    f_halves = []
    for seg in (envelope[:half], envelope[half:]):
        r_h, f_h = _band_metrics(seg, sample_rate_hz, cfg.resp_band_hz)
        if f_h is None or r_h < cfg.presence_ratio_db:
            return False, None
        f_halves.append(f_h)
    if abs(f_halves[0] - f_halves[1]) > _F0_STABILITY_HZ:
        return False, None
    return True, 60.0 * f0


def presence_flag(
    envelope: np.ndarray, sample_rate_hz: float, cfg: PipelineConfig | None = None
) -> bool:
    """True iff a sustained in-band rhythm dominates the envelope spectrum.

    Windows shorter than the configured presence window never flag presence.
    """
    cfg = cfg or PipelineConfig()
    if len(envelope) < int(cfg.presence_window_s * sample_rate_hz):
        return False
    present, _ = _presence_and_rate(envelope, sample_rate_hz, cfg)
    return present


def estimate_rate(
    envelope: np.ndarray, sample_rate_hz: float, cfg: PipelineConfig | None = None
) -> float | None:
    """Respiration rate [breaths/min] from the envelope, None if no presence.

    Needs at least 3 / f_lo seconds of data (three cycles of the slowest
    in-band rate) for a meaningful periodogram peak.
    """
    cfg = cfg or PipelineConfig()
    needed = 3.0 / cfg.resp_band_hz[0]
    have = len(envelope) / sample_rate_hz
    if have < needed:
        raise InsufficientDataError(
            f"need {needed:.1f} s of envelope for a rate estimate, have {have:.1f} s"
        )
    present, rate = _presence_and_rate(envelope, sample_rate_hz, cfg)
    return rate if present else None


class TraceRow(NamedTuple):
    t_slow: float
    raw_power_db: float
    recon_amp: float
    impulses: float
    envelope: float
    rate_bpm: float  # NaN while no estimate is available
    presence: bool


@dataclass
class RespirationTrace:
    """Slow-time series produced by the pipeline, one entry per chirp."""

    t_slow: np.ndarray
    raw_power_db: np.ndarray
    recon_amp: np.ndarray
    impulses: np.ndarray
    envelope: np.ndarray
    rate_bpm: np.ndarray  # NaN where unavailable
    presence: np.ndarray  # bool
    dropped_frames: int = 0

    def __len__(self) -> int:
        return len(self.t_slow)

    @property
    def final_rate_bpm(self) -> float | None:
        if len(self.rate_bpm) == 0 or math.isnan(self.rate_bpm[-1]):
            return None
        return float(self.rate_bpm[-1])

    @property
    def final_presence(self) -> bool:
        return bool(self.presence[-1]) if len(self.presence) else False

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["t_slow", "raw_power_db", "recon_amp", "impulses", "envelope",
                 "rate_bpm", "presence"]
            )
            for i in range(len(self.t_slow)):
                rate = self.rate_bpm[i]
                writer.writerow([
                    f"{self.t_slow[i]:.6f}",
                    f"{self.raw_power_db[i]:.10g}",
                    f"{self.recon_amp[i]:.10g}",
                    f"{self.impulses[i]:.10g}",
                    f"{self.envelope[i]:.10g}",
                    "" if math.isnan(rate) else f"{rate:.10g}",
                    int(self.presence[i]),
                ])


class RespirationPipeline:
    """Streaming engine: feed frames with push(), collect the trace.

    Single logical consumer with exclusive mutable state; feed it from a
    concurrent producer through a BoundedFrameQueue.  Per-frame work is
    O(fft_len log fft_len); memory is bounded by the presence window.
    Malformed frames (wrong sample count) are dropped and counted, never
    raised.
    """

    def __init__(
        self,
        radar_config: RadarConfig,
        cfar_config: CfarConfig | None = None,
        pipeline_config: PipelineConfig | None = None,
        fft_len: int | None = None,
        window: str = "hann",
        profile_hook=None,
        detection_hook=None,
    ):
        self.radar_config = radar_config
        self.cfar_config = cfar_config or CfarConfig()
        self.config = pipeline_config or PipelineConfig()
        self._n = radar_config.samples_per_chirp
        self._fft_len = fft_len or self._n
        if self._fft_len & (self._fft_len - 1) != 0 or self._fft_len < self._n:
            raise ValueError("fft_len must be a power of two >= samples_per_chirp")
        self._window = window
        # complex taper: same products as the real-valued taper, cheaper ufunc
        self._taper = None if window == "rectangular" else window_taper(window, self._n).astype(complex)
        self._tapered = np.empty(self._n, dtype=complex)  # per-push scratch
        self._range_axis = range_axis(radar_config, self._fft_len)
        self._interval = radar_config.chirp_interval_s
        slow_rate = radar_config.slow_rate_hz
        self._slow_rate = slow_rate
        self._tracker = PeakTracker(self.config.gate_bins, self.config.miss_limit)
        self._impulse_gate = _ImpulseGate(slow_rate, self.config)
        self._smoother = _EnvelopeSmoother(slow_rate, self.config.envelope_smoothing_s)
        self._window_n = max(2, int(round(self.config.presence_window_s * slow_rate)))
        self._decision_stride = max(1, int(round(self.config.decision_interval_s * slow_rate)))
        self._env_ring = _RingArray(self._window_n)
        self._emitted = 0
        self._pending: deque = deque()  # rows waiting for their envelope sample
        self._presence = False
        self._rate = math.nan
        self._profile_hook = profile_hook
        self._detection_hook = detection_hook
        self._auto_index = 0
        self.dropped_frames = 0
        self._cols: dict[str, list] = {
            "t": [], "raw": [], "recon": [], "imp": [], "env": [],
            "rate": [], "presence": [],
        }

    def push(self, samples, chirp_index: int | None = None, t_slow: float | None = None):
        """Process one frame; returns the TraceRow completed by it, if any."""
        if chirp_index is None:
            chirp_index = self._auto_index
        self._auto_index = chirp_index + 1
        if t_slow is None:
            t_slow = chirp_index * self._interval
        if len(samples) != self._n:
            self.dropped_frames += 1
            return None
        if self._taper is not None:
            samples = np.multiply(samples, self._taper, out=self._tapered)
        bins = np.fft.fft(samples, self._fft_len)[: self._fft_len // 2]
        profile = RangeProfile(bins, chirp_index, t_slow)
        if self._profile_hook is not None:
            self._profile_hook(profile)
        detections = ca_cfar(profile, self.cfar_config, self._range_axis)
        if self._detection_hook is not None and detections:
            self._detection_hook(detections)
        best = strongest_target(detections, self.config.search_gate_m)
        record = self._tracker.update(profile, best)
        if record is not None:
            raw_db = record.power_db
            recon = reconstruct_amplitude(record, self._fft_len)
        else:
            raw_db = math.nan
            recon = 0.0
        imp = self._impulse_gate.push(recon)
        self._pending.append((t_slow, raw_db, recon, imp))
        env = self._smoother.push(imp)
        if env is None:
            return None
        return self._complete_row(env)

    def finish(self) -> list[TraceRow]:
        """Flush rows delayed by the envelope lookahead."""
        return [self._complete_row(env) for env in self._smoother.finish()]

    def _complete_row(self, env: float) -> TraceRow:
        t, raw_db, recon, imp = self._pending.popleft()
        self._env_ring.append(env)
        self._emitted += 1
        if self._emitted >= self._window_n and self._emitted % self._decision_stride == 0:
            present, rate = _presence_and_rate(
                self._env_ring.snapshot(), self._slow_rate, self.config
            )
            self._presence = present
            self._rate = rate if rate is not None else math.nan
        row = TraceRow(t, raw_db, recon, imp, env, self._rate, self._presence)
        cols = self._cols
        cols["t"].append(t)
        cols["raw"].append(raw_db)
        cols["recon"].append(recon)
        cols["imp"].append(imp)
        cols["env"].append(env)
        cols["rate"].append(self._rate)
        cols["presence"].append(self._presence)
        return row

    def trace(self) -> RespirationTrace:
        cols = self._cols
        return RespirationTrace(
            t_slow=np.array(cols["t"]),
            raw_power_db=np.array(cols["raw"]),
            recon_amp=np.array(cols["recon"]),
            impulses=np.array(cols["imp"]),
            envelope=np.array(cols["env"]),
            rate_bpm=np.array(cols["rate"]),
            presence=np.array(cols["presence"], dtype=bool),
            dropped_frames=self.dropped_frames,
        )


def process_stream(
    frames: Iterable[ChirpFrame],
    radar_config: RadarConfig,
    cfar_config: CfarConfig | None = None,
    pipeline_config: PipelineConfig | None = None,
    **kwargs,
) -> RespirationTrace:
    """Run the pipeline over an iterable of ChirpFrames."""
    engine = RespirationPipeline(radar_config, cfar_config, pipeline_config, **kwargs)
    for frame in frames:
        engine.push(frame.samples, frame.chirp_index, frame.t_slow)
    engine.finish()
    return engine.trace()


def process_recording(
    recording,
    cfar_config: CfarConfig | None = None,
    pipeline_config: PipelineConfig | None = None,
    **kwargs,
) -> RespirationTrace:
    """Batch-process an IQRecording (equivalent to streaming its frames)."""
    engine = RespirationPipeline(
        recording.header.radar, cfar_config, pipeline_config, **kwargs
    )
    interval = recording.header.radar.chirp_interval_s
    for i in range(recording.header.n_chirps):
        engine.push(recording.frames[i], i, i * interval)
    engine.finish()
    return engine.trace()


class BoundedFrameQueue:
    """Bounded producer/consumer queue with selectable backpressure.

    policy 'block' stalls the producer when full; 'drop_oldest' evicts the
    oldest queued frame (counted in .dropped).  get() returns None once the
    queue is closed and drained.
    """

    def __init__(self, capacity: int = 256, policy: str = "block"):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        if policy not in ("block", "drop_oldest"):
            raise ValueError(f"unknown queue policy {policy!r}")
        self.capacity = capacity
        self.policy = policy
        self.dropped = 0
        self._items: deque = deque()
        self._closed = False
        self._lock = threading.Lock()
        self._not_empty = threading.Condition(self._lock)
        self._not_full = threading.Condition(self._lock)

    def put(self, item) -> None:
        with self._lock:
            if self._closed:
                raise RuntimeError("queue is closed")
            if self.policy == "block":
                while len(self._items) >= self.capacity and not self._closed:
                    self._not_full.wait()
            elif len(self._items) >= self.capacity:
                self._items.popleft()
                self.dropped += 1
            self._items.append(item)
            self._not_empty.notify()

    def get(self):
        with self._lock:
            while not self._items and not self._closed:
                self._not_empty.wait()
            if self._items:
                item = self._items.popleft()
                self._not_full.notify()
                return item
            return None

    def close(self) -> None:
        with self._lock:
            self._closed = True
            self._not_empty.notify_all()
            self._not_full.notify_all()
