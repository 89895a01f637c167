"""Power-based real-time respiration monitoring for FMCW radar.

Library + simulator + streaming CLI: synthesize breathing scenes as complex
baseband chirp recordings, then extract respiration presence and rate from
the slow-time power fluctuations of the tracked range peak.
"""

__version__ = "0.1.0"

from .cfar import CfarConfig, Detection, ca_cfar, cfar_alpha, strongest_target
from .dsp import ChirpFrame, RangeProfile, Waterfall, range_fft, window_apply
from .pipeline import (
    BoundedFrameQueue,
    PeakTrack,
    PeakTracker,
    PipelineConfig,
    RespirationPipeline,
    RespirationTrace,
    envelope_detect,
    estimate_rate,
    presence_flag,
    process_recording,
    process_stream,
    reconstruct_amplitude,
    threshold_impulses,
    track_peak,
)
from .radar import (
    C_LIGHT,
    PRESETS,
    RADAR_94G,
    RADAR_120G,
    ModulePreset,
    RadarConfig,
    beat_frequency,
    get_preset,
    range_axis,
    range_resolution,
)
from .recording import (
    IQRecording,
    IQRecordingHeader,
    read_recording,
    write_recording,
)
from .simulate import (
    BreathingTarget,
    ClutterPoint,
    Scene,
    chest_displacement,
    synth_frame,
    synth_recording,
)

__all__ = [
    "BoundedFrameQueue", "BreathingTarget", "C_LIGHT", "CfarConfig", "ChirpFrame",
    "ClutterPoint", "Detection", "IQRecording", "IQRecordingHeader", "ModulePreset",
    "PRESETS", "PeakTrack", "PeakTracker", "PipelineConfig", "RADAR_120G", "RADAR_94G",
    "RadarConfig", "RangeProfile", "RespirationPipeline", "RespirationTrace", "Scene",
    "Waterfall", "beat_frequency", "ca_cfar", "cfar_alpha", "chest_displacement",
    "envelope_detect", "estimate_rate", "get_preset", "presence_flag",
    "process_recording", "process_stream", "range_axis", "range_fft",
    "range_resolution", "reconstruct_amplitude", "strongest_target", "synth_frame",
    "synth_recording", "threshold_impulses", "track_peak", "window_apply",
]
