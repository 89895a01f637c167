"""Run configuration: JSON files with full defaulting, overridable by CLI flags."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .cfar import CfarConfig
from .pipeline import PipelineConfig
from .radar import RadarConfig, get_preset
from .simulate import Scene, scene_from_dict

CONFIG_ENV_VAR = "RESPMON_CONFIG"
DEFAULT_PRESET = "RADAR_120G"


@dataclass
class QueueConfig:
    policy: str = "block"  # block | drop_oldest
    capacity: int = 256

    def __post_init__(self):
        if self.policy not in ("block", "drop_oldest"):
            raise ValueError(f"unknown queue policy {self.policy!r}")
        if self.capacity < 1:
            raise ValueError("queue capacity must be >= 1")


@dataclass
class RunConfig:
    """Everything a CLI run needs besides the input/output paths."""

    preset: str = DEFAULT_PRESET
    radar: RadarConfig | None = None  # explicit config wins over the preset
    cfar: CfarConfig = field(default_factory=CfarConfig)
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)
    queue: QueueConfig = field(default_factory=QueueConfig)

    @property
    def radar_config(self) -> RadarConfig:
        return self.radar if self.radar is not None else get_preset(self.preset)


def _build(cls, d: dict, what: str):
    known = {f for f in cls.__dataclass_fields__}
    unknown = set(d) - known
    if unknown:
        raise ValueError(f"unknown {what} keys: {sorted(unknown)}")
    if "resp_band_hz" in d and d["resp_band_hz"] is not None:
        d = {**d, "resp_band_hz": tuple(d["resp_band_hz"])}
    if "search_gate_m" in d and d["search_gate_m"] is not None:
        d = {**d, "search_gate_m": tuple(d["search_gate_m"])}
    return cls(**d)


def run_config_from_dict(d: dict) -> RunConfig:
    known = {"preset", "radar", "cfar", "pipeline", "queue"}
    unknown = set(d) - known
    if unknown:
        raise ValueError(f"unknown run-config keys: {sorted(unknown)}")
    cfg = RunConfig()
    if "preset" in d and d["preset"] is not None:
        cfg.preset = d["preset"]
        get_preset(cfg.preset)  # fail early on unknown names
    if d.get("radar") is not None:
        cfg.radar = _build(RadarConfig, d["radar"], "radar")
    if d.get("cfar") is not None:
        cfg.cfar = _build(CfarConfig, d["cfar"], "cfar")
    if d.get("pipeline") is not None:
        cfg.pipeline = _build(PipelineConfig, d["pipeline"], "pipeline")
    if d.get("queue") is not None:
        cfg.queue = _build(QueueConfig, d["queue"], "queue")
    return cfg


def load_run_config(path: str | os.PathLike | None = None) -> RunConfig:
    """Load a run config; falls back to $RESPMON_CONFIG, then to defaults."""
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR) or None
    if path is None:
        return RunConfig()
    with open(Path(path)) as fh:
        return run_config_from_dict(json.load(fh))


def load_scene(path: str | os.PathLike) -> Scene:
    with open(Path(path)) as fh:
        return scene_from_dict(json.load(fh))
