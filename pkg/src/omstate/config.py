"""Run-time limits, read from flags with environment fallbacks."""

from __future__ import annotations

import os
from dataclasses import dataclass

ENV_PREFIX = "OMSTATE_"


def _env_int(name, default):
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{ENV_PREFIX}{name} must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class RunConfig:
    element_cap: int = 64
    semigroup_cap: int = 20000
    var_cap: int = 3
    worker_count: int = 1
    output_format: str = "text"

    def __post_init__(self):
        for name in ("element_cap", "semigroup_cap", "var_cap"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.worker_count < 1:
            raise ValueError("worker_count must be at least 1")
        if self.output_format not in ("text", "json"):
            raise ValueError("output_format must be 'text' or 'json'")

    @classmethod
    def from_env(cls, **overrides) -> RunConfig:
        """Environment values, with any non-None keyword taking precedence."""
        base = dict(
            element_cap=_env_int("ELEMENT_CAP", cls.element_cap),
            semigroup_cap=_env_int("SEMIGROUP_CAP", cls.semigroup_cap),
            var_cap=_env_int("VAR_CAP", cls.var_cap),
            worker_count=_env_int("WORKERS", cls.worker_count),
            output_format=os.environ.get(ENV_PREFIX + "FORMAT") or cls.output_format,
        )
        base.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**base)
