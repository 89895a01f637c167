"""IQ recording file format: raw complex samples plus a JSON header sidecar.

Data file: interleaved complex float32, little endian, real then imaginary,
frame-major.  Header: human-readable JSON next to the data file (same stem,
`.json` extension).  Simulated recordings may also carry a ground-truth CSV
(`<stem>.truth.csv`) with the per-chirp chest displacement.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

from .dsp import ChirpFrame
from .radar import RadarConfig

FORMAT_VERSION = 1
DATA_LAYOUT = "cf32le_frame_major"
_SAMPLE_DTYPE = np.dtype("<c8")  # 4-byte real + 4-byte imag


class RecordingError(Exception):
    """Base class for IQ recording file problems."""


class CorruptRecordingError(RecordingError):
    """Data file size disagrees with the header."""


class UnsupportedFormatError(RecordingError):
    """Header declares a format this reader does not understand."""


@dataclass(frozen=True)
class IQRecordingHeader:
    radar: RadarConfig
    n_chirps: int
    format_version: int = FORMAT_VERSION
    data_layout: str = DATA_LAYOUT
    scene: dict | None = None  # scene description for simulated data
    noise_seed: int | None = None

    def to_dict(self) -> dict:
        return {
            "format_version": self.format_version,
            "data_layout": self.data_layout,
            "radar": dataclasses.asdict(self.radar),
            "n_chirps": self.n_chirps,
            "scene": self.scene,
            "noise_seed": self.noise_seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "IQRecordingHeader":
        version = d.get("format_version")
        if version != FORMAT_VERSION:
            raise UnsupportedFormatError(f"unsupported format_version {version!r}")
        layout = d.get("data_layout")
        if layout != DATA_LAYOUT:
            raise UnsupportedFormatError(f"unsupported data_layout {layout!r}")
        return cls(
            radar=RadarConfig(**d["radar"]),
            n_chirps=int(d["n_chirps"]),
            format_version=version,
            data_layout=layout,
            scene=d.get("scene"),
            noise_seed=d.get("noise_seed"),
        )


@dataclass
class IQRecording:
    """In-memory recording: header, frame matrix, optional ground truth."""

    header: IQRecordingHeader
    frames: np.ndarray  # [n_chirps, samples_per_chirp] complex64
    truth_time_s: np.ndarray | None = None
    truth_displacement_m: np.ndarray | None = None

    def iter_frames(self) -> Iterator[ChirpFrame]:
        interval = self.header.radar.chirp_interval_s
        for i, samples in enumerate(self.frames):
            yield ChirpFrame(samples, i, i * interval)


def header_path(data_path) -> Path:
    return Path(data_path).with_suffix(".json")


def truth_path(data_path) -> Path:
    return Path(data_path).with_suffix(".truth.csv")


def write_recording(header: IQRecordingHeader, frames, data_path) -> Path:
    """Write frames (array or iterable of per-chirp arrays) plus the header."""
    data_path = Path(data_path)
    n_written = 0
    with open(data_path, "wb") as fh:
        if isinstance(frames, np.ndarray):
            np.ascontiguousarray(frames, dtype=_SAMPLE_DTYPE).tofile(fh)
            n_written = frames.shape[0] if frames.ndim == 2 else 0
        else:
            for frame in frames:
                samples = frame.samples if isinstance(frame, ChirpFrame) else frame
                np.ascontiguousarray(samples, dtype=_SAMPLE_DTYPE).tofile(fh)
                n_written += 1
    if n_written != header.n_chirps:
        raise ValueError(f"header says {header.n_chirps} chirps, wrote {n_written}")
    with open(header_path(data_path), "w") as fh:
        json.dump(header.to_dict(), fh, indent=2)
        fh.write("\n")
    return data_path


def read_header(data_path) -> IQRecordingHeader:
    hpath = header_path(data_path)
    if not hpath.exists():
        raise RecordingError(f"missing header sidecar {hpath}")
    with open(hpath) as fh:
        return IQRecordingHeader.from_dict(json.load(fh))


def read_recording(data_path) -> tuple[IQRecordingHeader, Iterator[ChirpFrame]]:
    """Open a recording; frames are streamed lazily from a memory map."""
    data_path = Path(data_path)
    header = read_header(data_path)
    n = header.n_chirps
    spc = header.radar.samples_per_chirp
    expected = n * spc * _SAMPLE_DTYPE.itemsize
    actual = os.path.getsize(data_path)
    if actual != expected:
        raise CorruptRecordingError(
            f"{data_path}: expected {expected} bytes "
            f"({n} chirps x {spc} samples), found {actual}"
        )

    def frames() -> Iterator[ChirpFrame]:
        if n == 0:
            return
        data = np.memmap(data_path, dtype=_SAMPLE_DTYPE, mode="r", shape=(n, spc))
        interval = header.radar.chirp_interval_s
        for i in range(n):
            yield ChirpFrame(data[i], i, i * interval)

    return header, frames()


def read_frames(data_path) -> tuple[IQRecordingHeader, np.ndarray]:
    """Eager variant of read_recording: the full frame matrix in memory."""
    header, frames = read_recording(data_path)
    spc = header.radar.samples_per_chirp
    if header.n_chirps == 0:
        return header, np.empty((0, spc), dtype=np.complex64)
    mat = np.stack([f.samples for f in frames])
    return header, mat


def write_truth_csv(path, time_s: np.ndarray, displacement_m: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time_s", "displacement_m"])
        for t, d in zip(time_s, displacement_m):
            writer.writerow([f"{t:.6f}", f"{d:.9e}"])


def read_truth_csv(path) -> tuple[np.ndarray, np.ndarray]:
    data = np.genfromtxt(path, delimiter=",", skip_header=1)
    data = np.atleast_2d(data)
    return data[:, 0], data[:, 1]
