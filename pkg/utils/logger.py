"""
Logging Configuration
"""

import logging
import sys
from pathlib import Path
from typing import Dict

from pythonjsonlogger import jsonlogger


def setup_logging(settings: Dict, level: int = logging.INFO):
    """
    Setup logging configuration

    Console output stays human readable; the log file gets one JSON record
    per line so training runs can be inspected with standard JSON tooling.

    Args:
        settings: Application settings dictionary
        level: Logging level

    Returns:
        The configured root logger
    """
    log_config = settings.get('logging', {})

    logger = logging.getLogger()
    logger.setLevel(level)

    # Clear existing handlers
    logger.handlers.clear()

    simple_formatter = logging.Formatter('%(levelname)s: %(message)s')

    # File handler (optional)
    log_file = log_config.get('file')
    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)

        json_formatter = jsonlogger.JsonFormatter(
            '%(asctime)s %(name)s %(levelname)s %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )
        file_handler = logging.FileHandler(log_path, mode='a', encoding='utf-8')
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(json_formatter)
        logger.addHandler(file_handler)

    # Console handler (if enabled)
    if log_config.get('console', True):
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(level)
        console_handler.setFormatter(simple_formatter)
        logger.addHandler(console_handler)

    # Set third-party loggers to WARNING to reduce noise
    logging.getLogger('joblib').setLevel(logging.WARNING)
    logging.getLogger('numexpr').setLevel(logging.WARNING)

    return logger


def resolve_level(settings: Dict, verbose: bool = False) -> int:
    """Map the configured level name to a logging constant (DEBUG when verbose)"""
    if verbose:
        return logging.DEBUG
    name = str(settings.get('logging', {}).get('level', 'INFO')).upper()
    return getattr(logging, name, logging.INFO)
