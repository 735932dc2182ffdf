"""
Loggers shared by every pathhom module.

    pathhom               progress and errors        logs/pathhom.log
    pathhom-runs          one line per run           logs/runs.log
    pathhom-diagnostics   input-data warnings        logs/diagnostics.log

Console output always goes to stderr; stdout carries results only.
"""
import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Any, Dict, Optional, Union

from pathhom.config.settings import settings

LOG_DIR = Path(settings.LOG_DIR)

FILE_FORMAT = logging.Formatter(
    "%(asctime)s - %(name)s - %(levelname)s - [%(filename)s:%(lineno)d] - %(message)s",
    datefmt="%Y-%m-%d %H:%M:%S",
)
CONSOLE_FORMAT = logging.Formatter("%(asctime)s - %(levelname)s - %(message)s", datefmt="%Y-%m-%d %H:%M:%S")

ROTATE_BYTES = 10 * 1024 * 1024
ROTATE_BACKUPS = 5


def _file_handler(path: Path, level: int) -> logging.Handler:
    path.parent.mkdir(parents=True, exist_ok=True)
    handler = RotatingFileHandler(path, maxBytes=ROTATE_BYTES, backupCount=ROTATE_BACKUPS)
    handler.setLevel(level)
    handler.setFormatter(FILE_FORMAT)
    return handler


def _console_handler(level: int) -> logging.Handler:
    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(level)
    handler.setFormatter(CONSOLE_FORMAT)
    return handler


def setup_logger(name: str, filename: str, level: Union[int, str] = logging.INFO,
                 to_file: Optional[bool] = None) -> logging.Logger:
    """
    Build (once) a logger writing to stderr and to LOG_DIR/filename.

    Args:
        name: Logger name
        filename: File under PATHHOM_LOG_DIR
        level: Level name or number
        to_file: Override PATHHOM_LOG_TO_FILE
    """
    if isinstance(level, str):
        level = getattr(logging, level.upper(), logging.INFO)
    log = logging.getLogger(name)
    if log.handlers:
        return log

    log.setLevel(level)
    log.propagate = False
    if settings.LOG_TO_FILE if to_file is None else to_file:
        log.addHandler(_file_handler(LOG_DIR / filename, level))
    log.addHandler(_console_handler(level))
    return log


def set_level(level: Union[int, str], log: Optional[logging.Logger] = None):
    """Change a logger and all its handlers at once (used by -v)."""
    log = log or logger
    if isinstance(level, str):
        level = getattr(logging, level.upper())
    log.setLevel(level)
    for handler in log.handlers:
        handler.setLevel(level)


logger = setup_logger("pathhom", "pathhom.log", level=settings.LOG_LEVEL)
runs_logger = setup_logger("pathhom-runs", "runs.log")
diagnostics_logger = setup_logger("pathhom-diagnostics", "diagnostics.log", level=logging.WARNING)


def log_run(command: str, target: str, exit_code: int,
            elapsed: Optional[float] = None, details: Optional[Dict[str, Any]] = None):
    """
    Record one CLI invocation or job run.

    Example line: ``census dag | Exit: 0 | Time: 1.520s | classes=5984``
    """
    parts = [f"{command} {target}", f"Exit: {exit_code}"]
    if elapsed is not None:
        parts.append(f"Time: {elapsed:.3f}s")
    if details:
        parts.append(" ".join(f"{k}={v}" for k, v in sorted(details.items())))
    runs_logger.info(" | ".join(parts))


def log_diagnostic(event_type: str, details: str, severity: str = "WARNING"):
    """
    Record a fact about the input data, as ``[EVENT_TYPE] details``.

    Events in use: LOOPS_STRIPPED, CONTACTS_BEFORE_ORIGIN, TRANSPOSE_DEFECT.
    """
    diagnostics_logger.log(getattr(logging, severity.upper(), logging.WARNING), f"[{event_type}] {details}")


__all__ = ["logger", "runs_logger", "diagnostics_logger", "log_run", "log_diagnostic", "setup_logger", "set_level"]
