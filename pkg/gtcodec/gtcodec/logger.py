"""
This file contains the global logger used across the codec.

Console records go to stderr so that stdout only carries the key=value
statistics printed by the command line.


file: gtcodec/gtcodec/logger.py
"""

import logging

from logging import getLogger
from logging.handlers import RotatingFileHandler

from rich.console import Console
from rich.logging import RichHandler
from pythonjsonlogger.json import JsonFormatter

logger = getLogger("gtcodec")
logger.handlers.clear()  # remove any old handlers (prevent duplicate logs)
logger.setLevel(logging.INFO)
logger.propagate = False

# stderr → terminal
console_handler = RichHandler(
    console=Console(stderr=True),
    show_time=False,
    show_path=False,
)
console_handler.setFormatter(logging.Formatter("%(message)s"))

logger.addHandler(console_handler)


def enable_file_logging(path: str, level: int = logging.DEBUG) -> RotatingFileHandler:
    """
    Add a rotating JSON-lines log file to the package logger.

    Args:
        `path` (str): Location of the log file.
        `level` (int): Minimum level written to the file.

    Returns:
        RotatingFileHandler: The installed handler.
    """
    file_handler = RotatingFileHandler(
        path, maxBytes=10_000_000, backupCount=5
    )
    file_handler.setLevel(level)
    file_handler.setFormatter(
        JsonFormatter(
            "%(asctime)s %(levelname)s %(name)s %(message)s",
            rename_fields={"levelname": "level", "asctime": "time"},
        )
    )
    logger.addHandler(file_handler)

    if logger.level > level:
        # the terminal keeps its previous verbosity
        if console_handler.level == logging.NOTSET:
            console_handler.setLevel(logger.level)
        logger.setLevel(level)

    return file_handler


def set_verbosity(level: int) -> None:
    """Set the level of the package logger and of its console handler."""
    logger.setLevel(level)
    console_handler.setLevel(level)
