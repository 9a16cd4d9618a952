"""
Logging configuration
"""
import logging
import sys
from typing import Optional

from pythonjsonlogger import jsonlogger

from oval.core.config import Settings, settings as default_settings


def setup_logging(config: Optional[Settings] = None) -> logging.Logger:
    """Setup application logging
    
    Reports are written to stdout, so log records always go to stderr.
    """
    config = config or default_settings
    
    logger = logging.getLogger()
    logger.setLevel(getattr(logging, config.LOG_LEVEL.upper()))
    
    # Remove existing handlers
    logger.handlers = []
    
    console_handler = logging.StreamHandler(sys.stderr)
    
    if config.LOG_FORMAT == "json":
        formatter = jsonlogger.JsonFormatter(
            '%(asctime)s %(name)s %(levelname)s %(message)s'
        )
    else:
        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )
    
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)
    
    # Set third-party loggers to WARNING
    logging.getLogger("numpy").setLevel(logging.WARNING)
    logging.getLogger("scipy").setLevel(logging.WARNING)
    
    return logger
