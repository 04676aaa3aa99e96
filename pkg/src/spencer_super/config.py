"""
Configuration and logging initialization for spencer-super.

init() is cached and loaded by the site customizer, so every entry point
(CLI, suite workers, tests) logs the same way. The remaining accessors read
environment overrides for the golden directory, the prolong cutoff and the
debug profile.
"""

import functools
import logging
import os
import pathlib
import sys
from typing import Callable, TextIO

LOG_LEVEL_ENV_NAME = "LOG_LEVEL"
GOLDEN_DIR_ENV_NAME = "SPENCER_GOLDEN_DIR"
MAX_DEGREE_ENV_NAME = "SPENCER_MAX_DEGREE"
CHECKS_ENV_NAME = "SPENCER_CHECKS"

DEFAULT_MAX_DEGREE = 6

_TRUTHY = {"1", "true", "yes", "on"}


@functools.cache
def init():
    """
    Initialize logging: INFO records go to stdout as bare messages, every
    other level goes to stderr with timestamps and source location. The
    LOG_LEVEL environment variable sets the root level, defaulting to INFO.
    """
    date_format = "%Y-%m-%d %H:%M:%S"
    format_stdout = "%(message)s"
    format_stderr = (
        "%(asctime)s.%(msecs)03d | %(levelname)s | %(name)s:%(lineno)d - %(message)s"
    )
    log_level_env = os.getenv(LOG_LEVEL_ENV_NAME, "").upper()
    log_level = logging.getLevelNamesMapping().get(log_level_env, logging.INFO)

    def _create_handler(
        stream: TextIO,
        level: int,
        format: str,
        filter_fn: Callable[[logging.LogRecord], bool] | None = None,
    ) -> logging.Handler:
        handler = logging.StreamHandler(stream)  # type: ignore[arg-type]
        handler.setLevel(level)
        handler.setFormatter(logging.Formatter(format))
        if filter_fn is not None:
            handler.addFilter(filter_fn)
        return handler

    handlers = [
        _create_handler(
            sys.stdout,
            logging.INFO,
            format_stdout,
            lambda record: record.levelno == logging.INFO,
        ),
        _create_handler(
            sys.stderr,
            logging.DEBUG,
            format_stderr,
            lambda record: record.levelno != logging.INFO,
        ),
    ]

    logging.basicConfig(level=log_level, datefmt=date_format, handlers=handlers)


def golden_dir() -> pathlib.Path:
    override = os.getenv(GOLDEN_DIR_ENV_NAME, "").strip()
    if override:
        return pathlib.Path(override)
    return pathlib.Path(__file__).parent / "goldens"


def max_degree() -> int:
    raw = os.getenv(MAX_DEGREE_ENV_NAME, "").strip()
    if not raw:
        return DEFAULT_MAX_DEGREE
    try:
        value = int(raw)
    except ValueError as e:
        raise ValueError(f"Invalid prolong cutoff - {MAX_DEGREE_ENV_NAME}:{raw}") from e
    if value < 1:
        raise ValueError(
            f"Prolong cutoff must be positive - {MAX_DEGREE_ENV_NAME}:{raw}"
        )
    return value


def checks_enabled() -> bool:
    """True under the debug profile (cross-checks and exhaustive identities)."""
    return os.getenv(CHECKS_ENV_NAME, "").strip().lower() in _TRUTHY


if __name__ == "__main__":
    init()
    logging.getLogger(__name__).info(
        "Configuration - golden_dir:%s max_degree:%s checks:%s",
        golden_dir(),
        max_degree(),
        checks_enabled(),
    )
