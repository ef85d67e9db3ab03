"""
Tests for the configuration system in petic.

These tests verify that defaults, runtime updates and environment variable overrides
behave as documented.
"""

import logging

import pytest

from petic.config import (
    DEFAULT_CONFIG,
    _load_env_vars,
    _update_nested_dict,
    config,
    configure_logging,
    get_setting,
    reset_config,
    update_config,
)


class TestConfigSystem:
    """Tests for the petic configuration system."""

    def test_defaults(self):
        assert get_setting("numerics", "blowup_threshold") == 1e12
        assert get_setting("ensemble", "decay_slack") == 1.5
        assert get_setting("ensemble", "max_exclusion_fraction") == 0.1

    def test_update_section(self):
        update_config("ensemble", max_workers=2)
        assert get_setting("ensemble", "max_workers") == 2

    def test_update_unknown_section_is_ignored(self):
        update_config("plotting", dpi=300)
        assert "plotting" not in config

    def test_reset_restores_defaults(self):
        update_config("numerics", identity_tol=1.0)
        reset_config()
        assert config == DEFAULT_CONFIG

    def test_unknown_key(self):
        with pytest.raises(KeyError):
            get_setting("numerics", "no_such_key")

    @pytest.mark.parametrize(
        "name,value,section,key,expected",
        [
            ("PETIC_ENSEMBLE__DECAY_SLACK", "2.0", "ensemble", "decay_slack", 2.0),
            ("PETIC_ENSEMBLE__MAX_WORKERS", "8", "ensemble", "max_workers", 8),
            ("PETIC_NUMERICS__LIPSCHITZ_SAMPLES", "50", "numerics", "lipschitz_samples", 50),
            ("PETIC_LOGGING__LEVEL", "DEBUG", "logging", "level", "DEBUG"),
        ],
    )
    def test_env_override(self, monkeypatch, name, value, section, key, expected):
        monkeypatch.setenv(name, value)
        _load_env_vars()
        assert get_setting(section, key) == expected
        assert type(get_setting(section, key)) is type(expected)

    def test_env_unknown_names_are_ignored(self, monkeypatch):
        monkeypatch.setenv("PETIC_NUMERICS__UNKNOWN", "1")
        monkeypatch.setenv("PETIC_NOSECTION", "1")
        _load_env_vars()
        assert "unknown" not in config["numerics"]

    def test_env_survives_reset(self, monkeypatch):
        monkeypatch.setenv("PETIC_ENSEMBLE__DECAY_SLACK", "3.5")
        reset_config()
        assert get_setting("ensemble", "decay_slack") == 3.5

    def test_nested_update(self):
        target = {"a": {"b": 1, "c": 2}, "d": 3}
        _update_nested_dict(target, {"a": {"b": 10}, "e": 4})
        assert target == {"a": {"b": 10, "c": 2}, "d": 3, "e": 4}


class TestLogging:
    """Tests for logger configuration."""

    def test_configure_level(self):
        configure_logging("debug")
        logger = logging.getLogger("petic")
        assert logger.level == logging.DEBUG
        assert logger.handlers
        configure_logging("WARNING")
        assert logger.level == logging.WARNING

    def test_single_handler(self):
        configure_logging()
        configure_logging()
        assert len(logging.getLogger("petic").handlers) == 1
