"""
Configuration model and manager tests.
"""

import math

import pytest
from pydantic import ValidationError

from anyonwalk.config.manager import DEFAULT_CONFIG_FILE, ConfigManager
from anyonwalk.config.models import (
    DisorderSettings,
    ProviderKind,
    RunConfig,
    SimulationMode,
    get_default_config,
    parse_levels,
)
from anyonwalk.engine.moment_table import MomentMode
from anyonwalk.exceptions import ConfigurationError, InvalidLevelError


class TestRunConfig:
    def test_defaults(self):
        config = get_default_config()
        assert config.mode is SimulationMode.EXACT
        assert config.level == 2
        assert config.steps == 100
        assert config.moment_mode is MomentMode.ASYMPTOTIC
        assert config.provider is ProviderKind.TABLE
        assert config.disorder.phase == pytest.approx(math.pi / 2)

    @pytest.mark.parametrize("level", ["inf", "Infinity", math.inf])
    def test_infinite_level(self, level):
        config = RunConfig(level=level)
        assert math.isinf(config.level)
        assert config.level_label == "inf"
        assert config.to_dict()["level"] == "inf"

    def test_integer_level_serializes_as_int(self):
        assert RunConfig(level="5").to_dict()["level"] == 5

    @pytest.mark.parametrize("level", [0, "zero", -3])
    def test_invalid_level(self, level):
        with pytest.raises(ValidationError):
            RunConfig(level=level)

    def test_unknown_key(self):
        with pytest.raises(ValidationError):
            RunConfig(stpes=10)

    def test_ring_size(self):
        assert RunConfig(steps=10).ring_size == 41
        assert RunConfig(steps=10, n_sites=64).ring_size == 64
        assert RunConfig(mode="circulant", steps=1).ring_size == 9
        assert RunConfig(mode="exact", steps=1).ring_size == 5

    def test_ring_too_small(self):
        with pytest.raises(ValidationError, match="4\\*steps\\+1"):
            RunConfig(steps=10, n_sites=40)

    def test_start_off_ring(self):
        with pytest.raises(ValidationError):
            RunConfig(steps=2, s0=9)

    def test_closed_form_only_at_ising(self):
        assert RunConfig(mode="closed-form", level=2).mode is SimulationMode.CLOSED_FORM
        with pytest.raises(ValidationError):
            RunConfig(mode="closed-form", level=3)

    def test_regularize_must_be_positive(self):
        with pytest.raises(ValidationError):
            RunConfig(regularize=0.0)

    def test_disorder_bounds(self):
        with pytest.raises(ValidationError):
            DisorderSettings(fill_p=2.0)
        with pytest.raises(ValidationError):
            DisorderSettings(seeds=0)

    def test_from_yaml(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("mode: circulant\nlevel: inf\nsteps: 20\ndisorder:\n  seeds: 4\n")
        config = RunConfig.from_yaml(path)
        assert config.mode is SimulationMode.CIRCULANT
        assert math.isinf(config.level)
        assert config.disorder.seeds == 4

    def test_empty_yaml_gives_defaults(self, tmp_path):
        path = tmp_path / "empty.yaml"
        path.write_text("")
        assert RunConfig.from_yaml(path) == RunConfig()

    def test_merge_with_is_deep(self):
        base = RunConfig(disorder={"seeds": 8, "fill_p": 0.3})
        merged = base.merge_with({"steps": 5, "disorder": {"seeds": 2}})
        assert merged.steps == 5
        assert merged.disorder.seeds == 2
        assert merged.disorder.fill_p == pytest.approx(0.3)
        assert base.steps == 100

    def test_round_trip_through_dict(self):
        config = RunConfig(mode="disorder", level=1, steps=7, distribution_times=[1, 7])
        assert RunConfig.from_dict(config.to_dict()) == config


class TestParseLevels:
    def test_mixed_list(self):
        levels = parse_levels("1, 2,inf")
        assert levels[:2] == [1, 2]
        assert math.isinf(levels[2])

    def test_list_input(self):
        assert parse_levels([3, "4"]) == [3, 4]

    @pytest.mark.parametrize("text", ["", ",", " , ", []])
    def test_empty(self, text):
        with pytest.raises(ConfigurationError):
            parse_levels(text)

    def test_invalid_entry(self):
        with pytest.raises(InvalidLevelError):
            parse_levels("2,x")


class TestConfigManager:
    def test_defaults_without_file(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        manager = ConfigManager()
        assert manager.build() == RunConfig()
        assert manager.get("steps") == 100

    def test_default_file_is_picked_up(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        (tmp_path / DEFAULT_CONFIG_FILE).write_text("level: 3\nsteps: 12\n")
        config = ConfigManager().build()
        assert config.level == 3
        assert config.steps == 12

    def test_explicit_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError, match="not found"):
            ConfigManager(str(tmp_path / "missing.yaml"))

    def test_malformed_yaml(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("level: [1, 2\n")
        with pytest.raises(ConfigurationError, match="Malformed"):
            ConfigManager(str(path))

    def test_non_mapping(self, tmp_path):
        path = tmp_path / "list.yaml"
        path.write_text("- 1\n- 2\n")
        with pytest.raises(ConfigurationError, match="mapping"):
            ConfigManager(str(path))

    def test_flags_override_file(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("level: 3\nsteps: 12\ndisorder:\n  seeds: 6\n  fill_p: 0.25\n")
        config = ConfigManager(str(path)).build(
            {"steps": 4, "level": None, "disorder": {"seeds": 2, "phase": None}}
        )
        assert config.level == 3
        assert config.steps == 4
        assert config.disorder.seeds == 2
        assert config.disorder.fill_p == pytest.approx(0.25)

    def test_invalid_merge_names_the_key(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("steps: 10\n")
        with pytest.raises(ConfigurationError) as excinfo:
            ConfigManager(str(path)).build({"level": "abc"})
        assert excinfo.value.invalid_key == "level"
