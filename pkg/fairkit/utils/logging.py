# fairkit/utils/logging.py
import sys

from loguru import logger

from fairkit import settings

_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>"
)

_sink_id = None


def _stderr(message) -> None:
    # Looked up on every write so redirected streams are honoured.
    sys.stderr.write(message)


def set_log_level(level: str) -> None:
    """Re-installs the stderr sink at ``level``.

    Standard output is reserved for reports, so the only console sink is
    standard error.
    """
    global _sink_id
    if _sink_id is not None:
        logger.remove(_sink_id)
    _sink_id = logger.add(
        _stderr,
        level=level.upper(),
        format=_FORMAT,
        colorize=False,
        backtrace=True,
        diagnose=False,
    )


# Basic Loguru configuration
logger.remove()  # Removes the default configuration
set_log_level(settings.LOG_LEVEL)

__all__ = ["logger", "set_log_level"]
