"""
Unit tests for check-aware logging.
"""

import json
import logging

import numpy as np

from src.core.config import settings
from src.core.correlation import check_context, check_id_var
from src.core.logging import CheckFormatter, JsonFormatter, get_logger, safe_repr


def _record(message: str = "hello") -> logging.LogRecord:
    return logging.LogRecord("lipmin.test", logging.INFO, __file__, 1, message, None, None)


class TestCheckContext:
    """Test the check ID context variable."""

    def test_default_is_dash(self):
        """Outside any check the ID is '-'."""
        assert check_id_var.get() == "-"

    def test_binds_and_restores(self, reset_check_id):
        """The name is bound inside the block and restored after it."""
        with check_context("minorant_brute_force_grid") as cid:
            assert cid == "minorant_brute_force_grid"
            assert check_id_var.get() == cid
        assert check_id_var.get() == "-"

    def test_generates_short_id(self, reset_check_id):
        """Without a name an 8-character ID is generated."""
        with check_context() as cid:
            assert len(cid) == 8


class TestFormatters:
    """Test log formatters."""

    def test_check_formatter_stamps_id(self, reset_check_id):
        """The human-readable format carries the current check ID."""
        formatter = CheckFormatter(fmt="[%(check_id)s] %(message)s")
        with check_context("tau_law"):
            assert formatter.format(_record()) == "[tau_law] hello"

    def test_json_formatter(self, reset_check_id):
        """Production format is one JSON object per line."""
        with check_context("tau_law"):
            line = JsonFormatter().format(_record("drawn"))
        entry = json.loads(line)
        assert entry["check_id"] == "tau_law"
        assert entry["message"] == "drawn"
        assert entry["level"] == "INFO"

    def test_get_logger_attaches_one_handler(self):
        """Repeated calls do not stack handlers."""
        first = get_logger("lipmin.test.handlers")
        second = get_logger("lipmin.test.handlers")
        assert first is second
        assert len(first.handlers) == 1

    def test_level_and_format_follow_settings(self, monkeypatch):
        """Log level and JSON output come from the settings, .env included."""
        monkeypatch.setattr(settings, "log_level", "debug")
        monkeypatch.setattr(settings, "lipmin_env", "production")
        logger = get_logger("lipmin.test.settings")
        assert logger.level == logging.DEBUG
        assert isinstance(logger.handlers[0].formatter, JsonFormatter)


class TestSafeRepr:
    """Test safe_repr."""

    def test_small_array_inline(self):
        """Short arrays are printed."""
        assert safe_repr(np.array([1, 2])) == "[1 2]"

    def test_large_array_summarized(self):
        """Long arrays are summarized by shape and range."""
        text = safe_repr(np.arange(1000.0))
        assert "shape=(1000,)" in text
        assert "max=999" in text

    def test_long_list_summarized(self):
        """Long lists show only their length."""
        assert safe_repr(list(range(100))) == "list(len=100)"
