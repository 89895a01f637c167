import json

import pytest

from respmon.cli import main


def test_presets_output(capsys):
    assert main(["presets"]) == 0
    out = capsys.readouterr().out
    lines = {line.split()[0]: line for line in out.strip().splitlines()}
    assert "resolution 0.025 m" in lines["RADAR_120G"]
    assert "resolution 0.011 m" in lines["RADAR_94G"]
    assert "carrier 120 GHz" in lines["RADAR_120G"]


def test_unknown_subcommand_exits_usage(capsys):
    with pytest.raises(SystemExit) as err:
        main(["frobnicate"])
    assert err.value.code == 1
    assert "usage" in capsys.readouterr().err


def test_no_subcommand_exits_usage(capsys):
    assert main([]) == 1
    assert "usage" in capsys.readouterr().err


def test_bad_flag_exits_usage(capsys):
    with pytest.raises(SystemExit) as err:
        main(["simulate", "--out", "x.iq", "--bogus"])
    assert err.value.code == 1


def test_missing_input_is_io_error(tmp_path, capsys):
    assert main(["process", str(tmp_path / "nope.iq")]) == 2


def test_simulate_writes_all_outputs(tmp_path, capsys):
    out = tmp_path / "rec.iq"
    code = main(["simulate", "--out", str(out), "--duration", "1.0", "--seed", "3"])
    assert code == 0
    assert out.exists()
    assert out.stat().st_size == 1000 * 512 * 8
    assert (tmp_path / "rec.json").exists()
    assert (tmp_path / "rec.truth.csv").exists()


def test_simulate_reproducible(tmp_path):
    a, b = tmp_path / "a.iq", tmp_path / "b.iq"
    main(["simulate", "--out", str(a), "--duration", "2.0", "--seed", "11"])
    main(["simulate", "--out", str(b), "--duration", "2.0", "--seed", "11"])
    assert a.read_bytes() == b.read_bytes()
    c = tmp_path / "c.iq"
    main(["simulate", "--out", str(c), "--duration", "2.0", "--seed", "12"])
    assert a.read_bytes() != c.read_bytes()


def test_simulate_with_scene_file(tmp_path):
    scene = tmp_path / "scene.json"
    scene.write_text(json.dumps({
        "targets": [{"range_m": 1.0, "displacement_amp_m": 0.002}],
        "noise_seed": 0,
        "duration_s": 1.5,
    }))
    out = tmp_path / "rec.iq"
    assert main(["simulate", "--scene", str(scene), "--out", str(out)]) == 0
    header = json.loads((tmp_path / "rec.json").read_text())
    assert header["n_chirps"] == 1500
    assert header["scene"]["targets"][0]["range_m"] == 1.0


def test_end_to_end_default_scene(tmp_path, capsys):
    out = tmp_path / "rec.iq"
    assert main(["simulate", "--out", str(out), "--seed", "1"]) == 0
    trace = tmp_path / "trace.csv"
    det = tmp_path / "det.jsonl"
    wf = tmp_path / "wf.csv"
    code = main([
        "process", str(out), "--trace", str(trace), "--detections", str(det),
        "--waterfall", str(wf), "--waterfall-stride", "100",
    ])
    assert code == 0
    summary = capsys.readouterr().out
    assert "presence=true" in summary
    # rate within 2 bpm of the demo scene's 0.25 Hz truth
    rate = float(summary.rsplit("rate=", 1)[1].split()[0])
    assert abs(rate - 15.0) <= 2.0

    rows = trace.read_text().strip().splitlines()
    assert len(rows) == 60_001  # header + one row per chirp
    assert rows[0].startswith("t_slow,")
    detections = [json.loads(line) for line in det.read_text().splitlines()]
    assert detections and all("bin" in d for d in detections)
    bins = {d["bin"] for d in detections}
    assert 80 in bins  # the subject at 2 m
    wf_rows = wf.read_text().strip().splitlines()
    assert len(wf_rows) == 601  # header + 60000/100 strided profiles


def test_process_trace_default_path(tmp_path, capsys):
    out = tmp_path / "rec.iq"
    main(["simulate", "--out", str(out), "--duration", "1.0", "--seed", "0"])
    assert main(["process", str(out)]) == 0
    assert (tmp_path / "rec.trace.csv").exists()
    assert (tmp_path / "rec.detections.jsonl").exists()


def test_monitor_smoke(tmp_path, capsys):
    code = main(["monitor", "--duration", "2.0", "--seed", "2",
                 "--queue-policy", "block"])
    assert code == 0
    out = capsys.readouterr().out
    assert "monitor done" in out
    assert "presence=false" in out  # 2 s is far below the presence window


def test_bench_smoke(capsys):
    code = main(["bench", "--duration", "3.0", "--seed", "0"])
    out = capsys.readouterr().out
    report = json.loads(out)
    assert report["frames"] == 3000
    assert report["chirp_interval_us"] == pytest.approx(1000.0)
    for key in ("frames_per_s", "realtime_factor", "latency_p50_us",
                "latency_p99_us", "latency_max_us", "realtime_ok"):
        assert key in report
    assert code in (0, 3)
    assert (code == 0) == report["realtime_ok"]


def test_preset_flag_changes_radar(tmp_path):
    out = tmp_path / "rec.iq"
    main(["simulate", "--out", str(out), "--duration", "0.5", "--seed", "0",
          "--preset", "RADAR_94G"])
    header = json.loads((tmp_path / "rec.json").read_text())
    assert header["radar"]["carrier_hz"] == 94e9
    assert header["radar"]["samples_per_chirp"] == 1024


def test_config_file_round_trip(tmp_path):
    cfg_path = tmp_path / "run.json"
    cfg_path.write_text(json.dumps({"preset": "RADAR_94G", "cfar": {"pfa": 1e-4}}))
    out = tmp_path / "rec.iq"
    assert main(["simulate", "--config", str(cfg_path), "--out", str(out),
                 "--duration", "0.5", "--seed", "0"]) == 0
    header = json.loads((tmp_path / "rec.json").read_text())
    assert header["radar"]["carrier_hz"] == 94e9
