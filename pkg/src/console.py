"""
Staged console output on stderr.

stdout is reserved for JSON reports, so every human-facing line goes here.
"""

import sys

from src.config import CONFIG

RULE = "=" * 70


def _emit(text: str) -> None:
    print(text, file=sys.stderr, flush=True)


def banner(title: str) -> None:
    _emit(RULE)
    _emit(title)
    _emit(RULE)


def stage(number, title: str) -> None:
    banner(f"STAGE {number}: {title}")


def info(text: str) -> None:
    _emit(f"📊 {text}")


def success(text: str) -> None:
    _emit(f"✅ {text}")


def warn(text: str) -> None:
    _emit(f"⚠️  {text}")


def error(text: str) -> None:
    _emit(f"❌ {text}")


def trace(text: str) -> None:
    """Library-level detail, printed only in verbose mode."""
    if CONFIG["verbose"]:
        _emit(f"   {text}")
