"""Runtime limits, overridable through environment variables or CLI flags."""

from __future__ import annotations

import os
from dataclasses import dataclass


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    return int(raw)


@dataclass
class Settings:
    max_order: int = 5000
    lattice_max_order: int = 512
    # groups above this size get sampled associativity checks only
    exhaustive_check_order: int = 512
    # cyclic-only oracle bound used when auditing formula terms
    oracle_max_order: int = 1000
    prime_horizon: int = 1_000_000
    workers: int = 1
    cache_dir: str | None = None

    @classmethod
    def from_env(cls) -> "Settings":
        return cls(
            max_order=_env_int("CYCLICDEG_MAX_ORDER", 5000),
            lattice_max_order=_env_int("CYCLICDEG_LATTICE_MAX_ORDER", 512),
            oracle_max_order=_env_int("CYCLICDEG_ORACLE_MAX_ORDER", 1000),
            prime_horizon=_env_int("CYCLICDEG_PRIME_HORIZON", 1_000_000),
            workers=_env_int("CYCLICDEG_WORKERS", 1),
            cache_dir=os.environ.get("CYCLICDEG_CACHE_DIR") or None,
        )


settings = Settings.from_env()


class OrderBoundError(RuntimeError):
    """A group is larger than the configured construction or lattice bound."""
