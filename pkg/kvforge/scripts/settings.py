"""
settings.py - Process-level configuration and progress output.

Values come from the environment (optionally a .env file loaded with
python-dotenv):

    KVFORGE_THREADS   worker bound for solver column evaluation, 0 = auto
    KVFORGE_VERBOSE   1/true/yes turns progress messages on
"""

import os
import sys
from typing import Optional

from dotenv import load_dotenv

from .errors import SettingsError

# Load environment variables
load_dotenv()

_TRUE_VALUES = {"1", "true", "yes", "on"}
_verbose_override: Optional[bool] = None


def thread_count() -> int:
    """
    Read KVFORGE_THREADS.

    Returns:
        int: 0 for automatic sizing, otherwise the worker bound
    """
    raw = os.getenv("KVFORGE_THREADS", "0").strip() or "0"
    try:
        value = int(raw)
    except ValueError:
        raise SettingsError(f"KVFORGE_THREADS must be an integer, got {raw!r}")
    if value < 0:
        raise SettingsError(f"KVFORGE_THREADS must be >= 0, got {value}")
    return value


def n_jobs() -> int:
    """joblib n_jobs value matching KVFORGE_THREADS."""
    count = thread_count()
    return -1 if count == 0 else count


def set_verbose(flag: Optional[bool]) -> None:
    """Override KVFORGE_VERBOSE for this process; None restores the env value."""
    global _verbose_override
    _verbose_override = flag


def verbose_enabled() -> bool:
    if _verbose_override is not None:
        return _verbose_override
    return os.getenv("KVFORGE_VERBOSE", "").strip().lower() in _TRUE_VALUES


def log(message: str) -> None:
    """Print a progress line to stderr when verbose output is on."""
    if verbose_enabled():
        print(message, file=sys.stderr)
