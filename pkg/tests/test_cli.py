import json

import pytest

from cogloop.cli import main

PROFILE = {
    "seed": 13,
    "topic": "photosynthesis",
    "segments": [{"duration_s": 8.0, "channels": {}}],
    "gaze_rate_hz": 30.0,
    "note_interval_s": 4.0,
}


@pytest.fixture()
def profile_path(tmp_path):
    path = tmp_path / "quick.json"
    path.write_text(json.dumps(PROFILE))
    return path


def _synth(tmp_path, profile_path):
    scenario = tmp_path / "scenario.jsonl"
    assert main(["synth", "--profile", str(profile_path), "--out", str(scenario)]) == 0
    return scenario


def test_synth_then_run_then_summarize(tmp_path, profile_path, capsys):
    scenario = _synth(tmp_path, profile_path)
    capsys.readouterr()

    trace = tmp_path / "out.trace.jsonl"
    assert main(["run", "--scenario", str(scenario), "--trace", str(trace)]) == 0
    out = capsys.readouterr().out
    assert "events: " in out
    assert "decisions: 0" in out  # flat profile, nothing to trigger

    assert main(["summarize", "--trace", str(trace)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["engine"] == "cogloop-0.1.0"
    assert summary["decisions_total"] == 0
    assert summary["ingest"]["accepted"] > 0


def test_synth_is_deterministic_on_disk(tmp_path, profile_path):
    a = tmp_path / "a.jsonl"
    b = tmp_path / "b.jsonl"
    assert main(["synth", "--profile", str(profile_path), "--out", str(a)]) == 0
    assert main(["synth", "--profile", str(profile_path), "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_bundled_profile_names_resolve(tmp_path):
    out = tmp_path / "bundled.jsonl"
    assert main(["synth", "--profile", "all_baseline", "--out", str(out)]) == 0
    assert out.exists()


def test_validate_scenario_and_trace(tmp_path, profile_path, capsys):
    scenario = _synth(tmp_path, profile_path)
    trace = tmp_path / "out.trace.jsonl"
    main(["run", "--scenario", str(scenario), "--trace", str(trace)])
    capsys.readouterr()
    code = main(["validate", "--scenario", str(scenario), "--trace", str(trace)])
    assert code == 0
    out = capsys.readouterr().out
    assert "scenario ok" in out
    assert "trace ok" in out


def test_validate_requires_an_input(capsys):
    assert main(["validate"]) == 2
    assert "needs --scenario or --trace" in capsys.readouterr().err


def test_malformed_scenario_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.jsonl"
    bad.write_text("{not json\n")
    assert main(["run", "--scenario", str(bad)]) == 2
    assert "error:" in capsys.readouterr().err


def test_missing_file_exits_1(tmp_path, capsys):
    assert main(["run", "--scenario", str(tmp_path / "absent.jsonl")]) == 1
    assert "error:" in capsys.readouterr().err


def test_config_file_layered_on_run(tmp_path, profile_path, capsys):
    scenario = _synth(tmp_path, profile_path)
    config = tmp_path / "tweak.cfg"
    config.write_text("trigger_threshold = not_a_number\n")
    assert main(["run", "--scenario", str(scenario), "--config", str(config)]) == 2
    assert "trigger_threshold" in capsys.readouterr().err
