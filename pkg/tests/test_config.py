"""
Settings and logging
"""
import json
import logging

import pytest

from oval.core.config import Settings
from oval.core.logging import setup_logging
from oval.services.oracle_service import OracleService


class TestSettings:
    """Environment-backed settings"""

    def test_only_used_fields(self):
        assert "ENVIRONMENT" not in Settings.model_fields
        assert "DEBUG" not in Settings.model_fields

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("OVAL_THREADS", "3")
        monkeypatch.setenv("LENGTH_TOLERANCE", "1e-7")
        config = Settings()
        assert config.OVAL_THREADS == 3
        assert config.LENGTH_TOLERANCE == 1e-7

    def test_field_names_are_case_sensitive(self, monkeypatch):
        monkeypatch.setenv("oval_threads", "5")
        assert Settings().OVAL_THREADS != 5


@pytest.fixture
def root_logger():
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield root
    root.handlers = handlers
    root.setLevel(level)


class TestLogging:
    """Values are part of the message text"""

    def test_oracle_message_carries_values(self, caplog, square):
        oracle = OracleService(Settings(OVAL_THREADS=1))
        with caplog.at_level(logging.INFO, logger="oval.services.oracle_service"):
            result = oracle.delta_bruteforce(square, 64.0)
        messages = [r.getMessage() for r in caplog.records if r.name == "oval.services.oracle_service"]
        assert any(f"{result.samples} samples" in m for m in messages)

    def test_json_format(self, capsys, root_logger, square):
        setup_logging(Settings(LOG_FORMAT="json", LOG_LEVEL="INFO"))
        OracleService(Settings(OVAL_THREADS=1)).delta_bruteforce(square, 64.0)
        lines = [json.loads(line) for line in capsys.readouterr().err.splitlines() if line.strip()]
        oracle_lines = [d for d in lines if d["name"] == "oval.services.oracle_service"]
        assert oracle_lines
        assert oracle_lines[0]["levelname"] == "INFO"
        assert "samples" in oracle_lines[0]["message"]

    def test_level_from_settings(self, root_logger):
        setup_logging(Settings(LOG_LEVEL="ERROR"))
        assert root_logger.level == logging.ERROR
        assert len(root_logger.handlers) == 1
