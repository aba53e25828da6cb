#!/usr/bin/env python3
"""Runtime settings read from the environment (and an optional .env file)."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple

from dotenv import load_dotenv

from twoham.errors import InputError

ENV_PREFIX = "TWOHAM"
THREADS_VAR = f"{ENV_PREFIX}_THREADS"


@dataclass(frozen=True)
class Settings:
    threads: int = 1


def _lookup_env(candidates: Tuple[str, ...]) -> Optional[str]:
    for name in candidates:
        value = os.getenv(name)
        if value and value.strip():
            return value.strip()
    return None


def _int_from_env(name: str, default: int, *, minimum: int = 1) -> int:
    raw = _lookup_env((name,))
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"{name} must be an integer, got {raw!r}") from None
    if value < minimum:
        raise InputError(f"{name} must be >= {minimum}, got {value}")
    return value


def load_settings(env_file: Optional[Path] = None) -> Settings:
    """Load `.env` (without overriding exported variables) and build Settings."""
    if env_file is not None:
        load_dotenv(env_file, override=False)
    else:
        load_dotenv(Path.cwd() / ".env", override=False)
    return Settings(threads=_int_from_env(THREADS_VAR, 1))
