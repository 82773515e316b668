#!/usr/bin/env python3
"""
Tests for experiment configuration: defaults, validation, precedence and
manifest round trips
"""
import json
import os
import sys
import tempfile
from dataclasses import fields

from beamhop_errors import ConfigurationError
from config import ExperimentConfig, RuntimeConfig, build_config, parse_config, runtime_config


def _write(tmp, name, text):
    path = os.path.join(tmp, name)
    with open(path, "w") as f:
        f.write(text)
    return path


def _expect_error(values, key, overrides=None):
    try:
        build_config(values, overrides)
    except ConfigurationError as e:
        assert e.key == key, f"expected key {key!r}, got {e.key!r} ({e})"
        assert str(e).startswith(f"{key}: ")
        return e
    raise AssertionError(f"{values} should be rejected")


def test_minimal_file_gets_defaults():
    with tempfile.TemporaryDirectory() as tmp:
        config = parse_config(_write(tmp, "exp.json", '{"band": "ka", "scheduler": "distance_limit"}'))
    assert config.max_beams == 100
    assert config.distance_limit_km == 42.0
    assert config.beam_diameter_km == 42.0
    assert config.p_max_w == 300.0
    assert config.i_max == 40
    assert config.ue_count == 1000
    assert (config.lon_min, config.lon_max, config.lat_min, config.lat_max) == (103.0, 113.0, 28.0, 33.0)
    assert config.scheduler == ("distance_limit",)
    assert config.packet_size_bits == 4_000_000
    assert config.slot_count == 1000
    assert config.band_profile.carrier_frequency_ghz == 20.0


def test_band_specific_packet_size():
    assert build_config({"band": "s", "traffic": "ftp3"}).packet_size_bytes == 50_000
    assert build_config({"band": "ka", "traffic": "ftp3"}).packet_size_bytes == 500_000
    assert build_config({"band": "s"}).packet_size_bytes == 500_000
    assert build_config({"band": "s", "traffic": "ftp3", "packet_size_bytes": 1000}).packet_size_bytes == 1000


def test_negative_distance_limit_names_key():
    _expect_error({"D_km": -1}, "D_km")
    _expect_error({"distance_limit_km": -1}, "distance_limit_km")


def test_unknown_key_rejected():
    error = _expect_error({"band": "ka", "beam_width": 3}, "beam_width")
    assert "unknown" in str(error)


def test_invalid_values_rejected():
    _expect_error({"band": "x"}, "band")
    _expect_error({"total_satellites": 10, "planes": 3}, "total_satellites")
    _expect_error({"I_max": 0}, "I_max")
    _expect_error({"i_max": "many"}, "i_max")
    _expect_error({"scheduler": ["distance_limit", "fifo"]}, "scheduler")
    _expect_error({"horizon_s": 1.0, "slot_length_s": 0.3}, "horizon_s")
    _expect_error({"propagate_satellites": 3}, "propagate_satellites")


def test_sweep_schedules_every_value():
    config = build_config({"i_max_sweep": [10, 20, 40, 100]})
    assert config.i_max_values == (10, 20, 40, 100)
    assert len(config.scheduler) * len(config.i_max_values) * len(config.seed) == 4
    assert build_config({}).i_max_values == (40,)
    assert build_config({"seed": [1, 2, 3]}).seed == (1, 2, 3)


def test_file_errors_are_distinct():
    messages = []
    with tempfile.TemporaryDirectory() as tmp:
        for path in (os.path.join(tmp, "missing.json"),
                     _write(tmp, "broken.json", '{"band": "ka",'),
                     _write(tmp, "list.json", '[1, 2]')):
            try:
                parse_config(path)
            except ConfigurationError as e:
                messages.append(str(e))
            else:
                raise AssertionError(f"{path} should not parse")
    assert "not found" in messages[0]
    assert "malformed" in messages[1]
    assert "JSON object" in messages[2]


def test_precedence_cli_over_env_over_file():
    saved = os.environ.get("BEAMHOP_SEED")
    os.environ["BEAMHOP_SEED"] = "3,4"
    try:
        assert build_config({"seed": 9}).seed == (3, 4)
        assert build_config({"seed": 9}, {"seed": "5"}).seed == (5,)
        assert build_config({"seed": 9}, {"seed": None}).seed == (3, 4)
    finally:
        if saved is None:
            del os.environ["BEAMHOP_SEED"]
        else:
            os.environ["BEAMHOP_SEED"] = saved


def test_runtime_config_holds_process_settings_only():
    names = {f.name for f in fields(RuntimeConfig)}
    assert names == {"log_level", "http_host", "http_port"}
    assert isinstance(runtime_config.http_port, int)
    assert build_config({"output_dir": "runs"}).output_dir == "runs"


def test_manifest_round_trip():
    config = build_config({"band": "s", "traffic": "ftp3", "scheduler": ["no_limit", "round_robin"],
                           "i_max_sweep": [10, 20], "seed": [1, 2], "noise_figure_db": 5.0,
                           "propagate_satellites": True})
    with tempfile.TemporaryDirectory() as tmp:
        path = _write(tmp, "manifest.json", json.dumps(config.to_dict(), indent=2, sort_keys=True))
        again = parse_config(path)
    assert again == config
    assert isinstance(again, ExperimentConfig)
    assert again.band_profile.ue_noise_figure_db == 5.0


def main():
    print("🧪 Experiment Configuration Test Suite")
    print("=" * 60)

    tests = [obj for name, obj in sorted(globals().items()) if name.startswith("test_") and callable(obj)]
    failed = 0
    for test in tests:
        try:
            test()
            print(f"✅ {test.__name__}")
        except AssertionError as e:
            failed += 1
            print(f"❌ {test.__name__}: {e}")

    print(f"\n{len(tests) - failed}/{len(tests)} configuration tests passed")
    return failed


if __name__ == "__main__":
    sys.exit(1 if main() else 0)
