"""Run configuration: defaults, then a JSON file, then ASTOWER_* variables."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

ENV_PREFIX = "ASTOWER_"


@dataclass(frozen=True)
class Config:
    cache_path: str = "astower-cache.json"
    # per-row point budget: 4^k times branch width
    budget: int = 4**12 * 32
    g_max_leaf: int = 12
    workers: int = 1
    output: str = "text"
    default_max_k: int = 12
    max_k: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("budget", "g_max_leaf", "workers", "default_max_k"):
            if getattr(self, name) <= 0:
                raise ValueError(f"config {name} must be positive")
        if any(v <= 0 for v in self.max_k.values()):
            raise ValueError("config max_k values must be positive")
        if self.output not in ("json", "text"):
            raise ValueError("config output must be 'json' or 'text'")

    def k_limit(self, curve_id: str) -> int:
        return self.max_k.get(curve_id, self.default_max_k)


_INT_FIELDS = {"budget", "g_max_leaf", "workers", "default_max_k"}


def load_config(path: str | os.PathLike | None = None, env=None) -> Config:
    env = os.environ if env is None else env
    values: dict = {}
    if path is not None:
        raw = json.loads(Path(path).read_text())
        known = {f.name for f in fields(Config)}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys {sorted(unknown)}")
        values.update(raw)
    for f in fields(Config):
        key = ENV_PREFIX + f.name.upper()
        if key in env and f.name != "max_k":
            values[f.name] = int(env[key]) if f.name in _INT_FIELDS else env[key]
    return replace(Config(), **values)
