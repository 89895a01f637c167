"""Per-chirp fast-time processing: windowing, range FFT, waterfall assembly."""

from __future__ import annotations

import csv
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

# Silent bins are floored here instead of -inf so downstream arithmetic stays total.
POWER_FLOOR_DB = -300.0

WINDOW_KINDS = ("rectangular", "hann")


@dataclass
class ChirpFrame:
    """One received chirp: N complex baseband samples plus slow-time tags."""

    samples: np.ndarray
    chirp_index: int = 0
    t_slow: float = 0.0


class RangeProfile:
    """Spectrum of one chirp: retained complex bins plus per-bin power in dB.

    Only the positive-range half of the transform is kept.  The complex bins
    are retained because the respiration stage reconstructs time-domain
    signals from masked spectra.  `power_db` is derived lazily; it always
    equals 20*log10(|complex_bins|) floored at POWER_FLOOR_DB.
    """

    __slots__ = ("complex_bins", "chirp_index", "t_slow", "_power_db")

    def __init__(self, complex_bins: np.ndarray, chirp_index: int = 0, t_slow: float = 0.0):
        self.complex_bins = complex_bins
        self.chirp_index = chirp_index
        self.t_slow = t_slow
        self._power_db = None

    def __len__(self) -> int:
        return len(self.complex_bins)

    @property
    def power_db(self) -> np.ndarray:
        if self._power_db is None:
            mag = np.abs(self.complex_bins)
            with np.errstate(divide="ignore"):
                self._power_db = np.maximum(20.0 * np.log10(mag), POWER_FLOOR_DB)
        return self._power_db


@lru_cache(maxsize=16)
def window_taper(kind: str, n: int) -> np.ndarray:
    """Taper coefficients for the supported window kinds."""
    if kind == "rectangular":
        return np.ones(n)
    if kind == "hann":
        return np.hanning(n)
    raise ValueError(f"unsupported window {kind!r}; choose from {WINDOW_KINDS}")


def window_apply(frame: ChirpFrame, kind: str = "hann") -> tuple[ChirpFrame, float]:
    """Apply a taper to one frame.

    Returns the tapered frame and the taper's coherent gain (mean of the
    taper), needed to calibrate absolute power downstream.
    """
    if len(frame.samples) == 0:
        raise ValueError("empty frame")
    taper = window_taper(kind, len(frame.samples))
    if kind == "rectangular":
        return frame, 1.0
    tapered = frame.samples * taper
    return ChirpFrame(tapered, frame.chirp_index, frame.t_slow), float(taper.mean())


def range_fft(frame: ChirpFrame, fft_len: int | None = None) -> RangeProfile:
    """Zero-pad, transform, and keep the positive-range half spectrum."""
    n = len(frame.samples)
    if fft_len is None:
        fft_len = n
    if fft_len < n:
        raise ValueError(f"fft_len {fft_len} shorter than frame length {n}")
    if fft_len & (fft_len - 1) != 0:
        raise ValueError(f"fft_len must be a power of two, got {fft_len}")
    bins = np.fft.fft(frame.samples, fft_len)[: fft_len // 2]
    return RangeProfile(bins, frame.chirp_index, frame.t_slow)


@dataclass
class Waterfall:
    """Ring of the most recent range profiles, ordered by slow time."""

    capacity: int
    _profiles: deque = field(default_factory=deque, repr=False)

    def __post_init__(self):
        if self.capacity < 1:
            raise ValueError("capacity must be >= 1")

    def __len__(self) -> int:
        return len(self._profiles)

    def push(self, profile: RangeProfile) -> "Waterfall":
        """Append a profile; evicts the oldest when over capacity."""
        if self._profiles and profile.t_slow <= self._profiles[-1].t_slow:
            raise ValueError(
                f"profiles must arrive in increasing slow time "
                f"({profile.t_slow} after {self._profiles[-1].t_slow})"
            )
        self._profiles.append(profile)
        if len(self._profiles) > self.capacity:
            self._profiles.popleft()
        return self

    def profiles(self) -> list[RangeProfile]:
        return list(self._profiles)

    def times(self) -> np.ndarray:
        return np.array([p.t_slow for p in self._profiles])

    def bin_magnitude(self, bin_index: int) -> np.ndarray:
        """Slow-time slice: |complex bin| at one range bin across the ring."""
        return np.array([abs(p.complex_bins[bin_index]) for p in self._profiles])

    def power_matrix(self) -> np.ndarray:
        """dB power matrix, rows = slow time, cols = range bins."""
        if not self._profiles:
            return np.empty((0, 0))
        return np.stack([p.power_db for p in self._profiles])

    def write_csv(self, path) -> None:
        """rows = slow time, cols = range bins, values = dB; col 0 is t_slow."""
        mat = self.power_matrix()
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            ncols = mat.shape[1] if mat.size else 0
            writer.writerow(["t_slow"] + [f"bin{i}" for i in range(ncols)])
            for t, row in zip(self.times(), mat):
                writer.writerow([f"{t:.6f}"] + [f"{v:.3f}" for v in row])
