"""Configuration for efpi.

Environment variables (+ .env files) form the base; CLI flags override them per
run. Nothing here is persisted: the memo cache location is the only file the
tool writes.
"""

from __future__ import annotations

import os
from pathlib import Path

from dotenv import load_dotenv
from pydantic import BaseModel

from .errors import ConfigError

DEFAULT_MAX_DEPTH = 4
DEFAULT_CLOSURE_BUDGET = 2
DEFAULT_CLOSURE_LIMIT = 4000
DEFAULT_APPROX_K = 8


def default_budget(depth: int) -> int:
    """Representative budget B for a game of the given quantifier depth."""
    return 2**depth + depth


def data_dir() -> Path:
    base = os.environ.get("EFPI_DATA_DIR")
    if base:
        path = Path(base)
    elif os.name == "nt":
        path = Path(os.environ.get("LOCALAPPDATA", Path.home())) / "efpi"
    else:
        path = Path.home() / ".efpi"
    path.mkdir(parents=True, exist_ok=True)
    return path


_env_loaded = False


def _load_env_files() -> None:
    global _env_loaded
    if _env_loaded:
        return
    root = Path(__file__).resolve().parent.parent
    candidates = [root / ".env"]
    override_dir = os.environ.get("EFPI_DATA_DIR")
    if override_dir:
        candidates.append(Path(override_dir) / ".env")
    else:
        candidates.append(Path.home() / ".efpi" / ".env")
    for candidate in candidates:
        if candidate.exists():
            load_dotenv(candidate, override=False)
    _env_loaded = True


def _optional_int_env(name: str, minimum: int) -> int | None:
    raw = os.environ.get(name)
    if raw is None or not raw.strip():
        return None
    try:
        value = int(raw.strip())
    except ValueError as exc:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from exc
    if value < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got {value}")
    return value


def _int_env(name: str, default: int, minimum: int = 1) -> int:
    value = _optional_int_env(name, minimum)
    return default if value is None else value


class Settings(BaseModel):
    cache_path: Path | None = None
    max_depth: int = DEFAULT_MAX_DEPTH
    # None: derive B from the depth of each game
    budget: int | None = None
    closure_budget: int = DEFAULT_CLOSURE_BUDGET
    closure_limit: int = DEFAULT_CLOSURE_LIMIT
    approx_k: int = DEFAULT_APPROX_K
    log_level: str = "INFO"

    @classmethod
    def from_env(cls) -> "Settings":
        _load_env_files()
        cache = os.environ.get("EFPI_CACHE")
        return cls(
            cache_path=Path(cache) if cache else None,
            max_depth=_int_env("EFPI_MAX_DEPTH", DEFAULT_MAX_DEPTH, minimum=0),
            budget=_optional_int_env("EFPI_BUDGET", minimum=1),
            closure_budget=_int_env("EFPI_CLOSURE_BUDGET", DEFAULT_CLOSURE_BUDGET),
            closure_limit=_int_env("EFPI_CLOSURE_LIMIT", DEFAULT_CLOSURE_LIMIT),
            approx_k=_int_env("EFPI_APPROX_K", DEFAULT_APPROX_K),
            log_level=os.environ.get("EFPI_LOG_LEVEL", "INFO").strip().upper() or "INFO",
        )

    def budget_for(self, depth: int) -> int:
        return self.budget if self.budget else default_budget(depth)
