"""Command-line interface: simulate, process, monitor, bench, presets."""

from __future__ import annotations

import argparse
import json
import sys
import threading
from pathlib import Path

import numpy as np

from . import __version__
from .bench import run_bench
from .config import RunConfig, load_run_config, load_scene
from .dsp import Waterfall
from .pipeline import BoundedFrameQueue, RespirationPipeline
from .radar import PRESETS, range_resolution
from .recording import (
    RecordingError,
    read_frames,
    truth_path,
    write_recording,
    write_truth_csv,
)
from .simulate import BreathingTarget, ClutterPoint, Scene, synth_frame, synth_recording

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_PROCESSING = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; the CLI contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _default_scene(duration_s: float, seed: int | None) -> Scene:
    """One breathing subject at 2 m plus light static clutter."""
    return Scene(
        targets=(BreathingTarget(range_m=2.0, displacement_amp_m=0.001),),
        clutter=(
            ClutterPoint(range_m=0.8, amplitude=0.05),
            ClutterPoint(range_m=4.5, amplitude=0.03, phase_rad=1.0),
        ),
        noise_seed=seed,
        duration_s=duration_s,
    )


def _resolve_scene(args) -> Scene:
    if args.scene:
        scene = load_scene(args.scene)
        overrides = {}
        if args.duration is not None:
            overrides["duration_s"] = args.duration
        if args.seed is not None:
            overrides["noise_seed"] = args.seed
        if overrides:
            scene = Scene(
                targets=scene.targets,
                clutter=scene.clutter,
                noise_seed=overrides.get("noise_seed", scene.noise_seed),
                duration_s=overrides.get("duration_s", scene.duration_s),
            )
        return scene
    duration = args.duration if args.duration is not None else 60.0
    seed = args.seed if args.seed is not None else 0
    return _default_scene(duration, seed)


def _resolve_run_config(args) -> RunConfig:
    cfg = load_run_config(args.config)
    if getattr(args, "preset", None):
        cfg.preset = args.preset
        cfg.radar = None
    return cfg


def _cmd_presets(args) -> int:
    for preset in PRESETS.values():
        c = preset.config
        print(
            f"{preset.name}  carrier {c.carrier_hz / 1e9:g} GHz  "
            f"bandwidth {c.bandwidth_hz / 1e9:g} GHz  "
            f"aperture {c.beam_aperture_deg:g} deg  "
            f"snr_ref {c.snr_ref_db:g} dB  "
            f"resolution {range_resolution(c):.3f} m"
        )
    return EXIT_OK


def _cmd_simulate(args) -> int:
    cfg = _resolve_run_config(args)
    scene = _resolve_scene(args)
    recording = synth_recording(cfg.radar_config, scene)
    out = Path(args.out)
    write_recording(recording.header, recording.frames, out)
    write_truth_csv(truth_path(out), recording.truth_time_s, recording.truth_displacement_m)
    print(
        f"wrote {recording.header.n_chirps} chirps to {out} "
        f"(+{out.with_suffix('.json').name}, +{truth_path(out).name})"
    )
    return EXIT_OK


def _cmd_process(args) -> int:
    cfg = _resolve_run_config(args)
    header, frames = read_frames(args.input)
    stem = Path(args.input).with_suffix("")
    trace_out = Path(args.trace) if args.trace else Path(f"{stem}.trace.csv")
    det_out = Path(args.detections) if args.detections else Path(f"{stem}.detections.jsonl")

    waterfall = None
    profile_hook = None
    if args.waterfall:
        stride = max(1, args.waterfall_stride)
        waterfall = Waterfall(capacity=header.n_chirps // stride + 1)

        def profile_hook(profile, _wf=waterfall, _stride=stride):
            if profile.chirp_index % _stride == 0:
                _wf.push(profile)

    interval = header.radar.chirp_interval_s
    with open(det_out, "w") as det_fh:
        def detection_hook(detections):
            for det in detections:
                det_fh.write(det.to_json() + "\n")

        engine = RespirationPipeline(
            header.radar, cfg.cfar, cfg.pipeline,
            profile_hook=profile_hook, detection_hook=detection_hook,
        )
        for i in range(header.n_chirps):
            engine.push(frames[i], i, i * interval)
        engine.finish()
    trace = engine.trace()
    trace.to_csv(trace_out)
    if waterfall is not None:
        waterfall.write_csv(args.waterfall)
    rate = trace.final_rate_bpm
    print(
        f"processed {header.n_chirps} chirps, dropped {trace.dropped_frames}; "
        f"presence={'true' if trace.final_presence else 'false'}"
        + (f" rate={rate:.1f} bpm" if rate is not None else "")
    )
    return EXIT_OK


def _cmd_monitor(args) -> int:
    cfg = _resolve_run_config(args)
    scene = _resolve_scene(args)
    radar = cfg.radar_config
    queue_cfg = cfg.queue
    if args.queue_policy:
        queue_cfg.policy = args.queue_policy
    queue = BoundedFrameQueue(queue_cfg.capacity, queue_cfg.policy)
    n_chirps = int(round(scene.duration_s / radar.chirp_interval_s))

    def produce():
        try:
            for i in range(n_chirps):
                queue.put(synth_frame(radar, scene, i))
        finally:
            queue.close()

    producer = threading.Thread(target=produce, name="synth-producer", daemon=True)
    producer.start()
    engine = RespirationPipeline(radar, cfg.cfar, cfg.pipeline)
    next_print = 0.0
    while True:
        frame = queue.get()
        if frame is None:
            break
        row = engine.push(frame.samples, frame.chirp_index, frame.t_slow)
        if row is not None and row.t_slow >= next_print:
            rate = "  ----" if np.isnan(row.rate_bpm) else f"{row.rate_bpm:6.1f}"
            print(
                f"t={row.t_slow:7.2f}s  envelope={row.envelope:.4g}  "
                f"rate={rate} bpm  presence={'yes' if row.presence else 'no'}"
            )
            next_print += 1.0
    engine.finish()
    producer.join()
    trace = engine.trace()
    rate = trace.final_rate_bpm
    print(
        f"monitor done: {len(trace)} chirps, queue dropped {queue.dropped}; "
        f"presence={'true' if trace.final_presence else 'false'}"
        + (f" rate={rate:.1f} bpm" if rate is not None else "")
    )
    return EXIT_OK


def _cmd_bench(args) -> int:
    cfg = _resolve_run_config(args)
    scene = _resolve_scene(args)
    recording = synth_recording(cfg.radar_config, scene)
    report = run_bench(recording, cfg.cfar, cfg.pipeline)
    print(report.to_json())
    return EXIT_OK if report.realtime_ok else EXIT_PROCESSING


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="respmon",
        description="Power-based respiration monitoring for FMCW radar "
        "(simulator, processing pipeline, live monitor).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")

    def add_common(p, scene=True):
        p.add_argument("--config", help="run-config JSON (default: $RESPMON_CONFIG)")
        p.add_argument("--preset", choices=sorted(PRESETS), help="radar module preset")
        if scene:
            p.add_argument("--scene", help="scene JSON file (default: built-in demo scene)")
            p.add_argument("--seed", type=int, help="noise seed override")
            p.add_argument("--duration", type=float, help="scene duration override [s]")

    p = sub.add_parser("simulate", help="synthesize a scene into an IQ recording")
    add_common(p)
    p.add_argument("--out", required=True, help="output IQ data path (e.g. rec.iq)")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("process", help="run the respiration pipeline over a recording")
    add_common(p, scene=False)
    p.add_argument("input", help="IQ recording path")
    p.add_argument("--trace", help="trace CSV output (default <input>.trace.csv)")
    p.add_argument("--detections", help="detections JSONL output (default <input>.detections.jsonl)")
    p.add_argument("--waterfall", help="also export a waterfall CSV to this path")
    p.add_argument("--waterfall-stride", type=int, default=10,
                   help="keep every Nth profile in the waterfall export")
    p.set_defaults(func=_cmd_process)

    p = sub.add_parser("monitor", help="simulate and process concurrently, print live status")
    add_common(p)
    p.add_argument("--queue-policy", choices=("block", "drop_oldest"),
                   help="producer backpressure policy")
    p.set_defaults(func=_cmd_monitor)

    p = sub.add_parser("bench", help="measure frames/s and per-frame latency percentiles")
    add_common(p)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("presets", help="list radar module presets")
    p.set_defaults(func=_cmd_presets)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "command", None):
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (FileNotFoundError, RecordingError, json.JSONDecodeError, OSError) as exc:
        print(f"respmon: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, RuntimeError) as exc:
        print(f"respmon: {exc}", file=sys.stderr)
        return EXIT_PROCESSING


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
