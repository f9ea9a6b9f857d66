"""Logging utilities for gridskg."""

import logging
import sys
import traceback
from pathlib import Path
from typing import Optional, Union

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def setup_logger(
    name: str = "gridskg",
    level: Union[int, str] = logging.INFO,
    log_file: Optional[Path] = None,
) -> logging.Logger:
    """Set up a logger that writes to standard error and optionally a file.

    Standard output is reserved for the JSON summaries printed by the CLI.

    Args:
        name: Name of the logger
        level: Logging level (name or number)
        log_file: Optional path of a log file to append to

    Returns:
        Logger instance
    """
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.INFO

    logger = logging.getLogger(name)
    logger.setLevel(level)

    # Remove existing handlers to avoid duplicates
    if logger.hasHandlers():
        logger.handlers.clear()

    formatter = logging.Formatter(LOG_FORMAT)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_file:
        log_file = Path(log_file)
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(str(log_file))
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger


def log_exception(logger: logging.Logger, message: str = "Exception occurred", exc_info=None):
    """Log an exception with full traceback."""
    if exc_info is None:
        exc_type, exc_value, exc_traceback = sys.exc_info()
    else:
        exc_type, exc_value, exc_traceback = exc_info

    if exc_traceback:
        stack_trace = "".join(
            traceback.format_exception(exc_type, exc_value, exc_traceback)
        )
    else:
        stack_trace = "No traceback available"

    logger.error(f"{message}: {exc_value}\nTraceback:\n{stack_trace}")
