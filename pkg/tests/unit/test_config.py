"""Tests for omega_coend.config module"""
from pathlib import Path

import pytest
from pydantic import ValidationError

from omega_coend.config import LoopMode, Settings, Variant


class TestSettings:
    """Tests for Settings"""

    def test_defaults(self, clean_env):
        """from_env() should give the documented defaults on a clean environment"""
        settings = Settings.from_env()

        assert settings.max_dim == 2
        assert settings.max_width == 3
        assert settings.max_size == 2
        assert settings.max_cells == 20000
        assert settings.variant is Variant.LEFT
        assert settings.loop_mode is LoopMode.FOUR_WAY
        assert settings.cache_dir is None

    def test_environment_overrides_defaults(self, clean_env, monkeypatch):
        """from_env() should read OMEGA_COEND_* variables"""
        monkeypatch.setenv("OMEGA_COEND_MAX_DIM", "3")
        monkeypatch.setenv("OMEGA_COEND_VARIANT", "right")
        monkeypatch.setenv("OMEGA_COEND_CACHE_DIR", "/tmp/coend-cache")

        settings = Settings.from_env()

        assert settings.max_dim == 3
        assert settings.variant is Variant.RIGHT
        assert settings.cache_dir == Path("/tmp/coend-cache")

    def test_explicit_overrides_win(self, clean_env, monkeypatch):
        """Keyword overrides should beat the environment, and None should be ignored"""
        monkeypatch.setenv("OMEGA_COEND_MAX_WIDTH", "5")

        settings = Settings.from_env(max_width=2, max_size=None)

        assert settings.max_width == 2
        assert settings.max_size == 2

    def test_empty_variable_is_ignored(self, clean_env, monkeypatch):
        """An empty variable should fall back to the default"""
        monkeypatch.setenv("OMEGA_COEND_LOOP_MODE", "")

        assert Settings.from_env().loop_mode is LoopMode.FOUR_WAY

    def test_explicit_mapping(self):
        """from_env() should read a given mapping instead of os.environ"""
        settings = Settings.from_env({"OMEGA_COEND_LOOP_MODE": "two-way"})

        assert settings.loop_mode is LoopMode.TWO_WAY

    @pytest.mark.parametrize("field, value", [("max_dim", 99), ("max_dim", -1), ("max_cells", 0), ("variant", "middle")])
    def test_invalid_values(self, clean_env, field, value):
        """Out-of-range values should raise a pydantic ValidationError"""
        with pytest.raises(ValidationError):
            Settings.from_env(**{field: value})

    def test_settings_are_frozen(self, clean_env):
        """Settings should be immutable"""
        settings = Settings.from_env()

        with pytest.raises(ValidationError):
            settings.max_dim = 1
