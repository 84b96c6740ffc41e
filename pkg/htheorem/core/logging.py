# htheorem/core/logging.py

import logging
import sys
from logging.handlers import RotatingFileHandler
from typing import Optional

from core.config import settings

_FORMAT = "%(asctime)s | %(levelname)-8s | %(name)s | %(funcName)s:%(lineno)d | %(message)s"
_MARKER = "_htheorem_handler"


def setup_logging(level: Optional[str] = None) -> None:
    """
    Console (stderr) logging plus an optional rotating file.
    Reports own stdout, so nothing here ever writes there.
    Safe to call more than once: our handlers are replaced, not stacked.
    """

    log_level = (level or settings.LOG_LEVEL).upper()

    root_logger = logging.getLogger()
    root_logger.setLevel(getattr(logging, log_level, logging.WARNING))

    for handler in list(root_logger.handlers):
        if getattr(handler, _MARKER, False):
            root_logger.removeHandler(handler)
            handler.close()

    formatter = logging.Formatter(_FORMAT, datefmt="%Y-%m-%d %H:%M:%S")

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(getattr(logging, log_level, logging.WARNING))
    console_handler.setFormatter(formatter)
    setattr(console_handler, _MARKER, True)
    root_logger.addHandler(console_handler)

    if settings.LOG_FILE:
        try:
            file_handler = RotatingFileHandler(
                settings.LOG_FILE,
                maxBytes=10 * 1024 * 1024,  # 10MB
                backupCount=5,
            )
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(formatter)
            setattr(file_handler, _MARKER, True)
            root_logger.addHandler(file_handler)
        except OSError as e:
            logging.warning(f"Failed to setup file logging: {e}")

    logging.getLogger(__name__).debug(f"Logging initialized - Level: {log_level}")
