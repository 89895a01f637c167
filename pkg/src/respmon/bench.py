"""Throughput and latency benchmark of the per-frame processing path."""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass

import numpy as np

from .cfar import CfarConfig
from .pipeline import PipelineConfig, RespirationPipeline
from .recording import IQRecording


@dataclass
class BenchReport:
    frames: int
    wall_s: float
    frames_per_s: float
    realtime_factor: float  # processed slow-time seconds per wall second
    chirp_interval_us: float
    latency_p50_us: float
    latency_p90_us: float
    latency_p99_us: float
    latency_max_us: float
    realtime_ok: bool  # p99 per-frame latency under one chirp interval

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)


def run_bench(
    recording: IQRecording,
    cfar_config: CfarConfig | None = None,
    pipeline_config: PipelineConfig | None = None,
) -> BenchReport:
    """Replay a recording through the pipeline, timing every push."""
    radar = recording.header.radar
    engine = RespirationPipeline(radar, cfar_config, pipeline_config)
    frames = recording.frames
    n = len(frames)
    interval = radar.chirp_interval_s
    latencies = np.empty(n)
    clock = time.perf_counter
    t_start = clock()
    for i in range(n):
        t0 = clock()
        engine.push(frames[i], i, i * interval)
        latencies[i] = clock() - t0
    engine.finish()
    wall = clock() - t_start
    p50, p90, p99 = np.percentile(latencies, [50.0, 90.0, 99.0]) if n else (0.0, 0.0, 0.0)
    return BenchReport(
        frames=n,
        wall_s=wall,
        frames_per_s=n / wall if wall > 0 else 0.0,
        realtime_factor=n * interval / wall if wall > 0 else 0.0,
        chirp_interval_us=interval * 1e6,
        latency_p50_us=float(p50 * 1e6),
        latency_p90_us=float(p90 * 1e6),
        latency_p99_us=float(p99 * 1e6),
        latency_max_us=float(latencies.max() * 1e6) if n else 0.0,
        realtime_ok=bool(n and p99 < interval),
    )
