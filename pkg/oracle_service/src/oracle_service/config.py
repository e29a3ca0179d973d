"""Service configuration."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

__all__ = ["ServiceConfig"]

DEFAULT_PROPERTIES = ("qed", "sa")


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8100
    properties: tuple[str, ...] = DEFAULT_PROPERTIES
    model_paths: dict[str, str] = field(default_factory=dict)  # property -> artifact
    max_batch: int = 128

    def __post_init__(self) -> None:
        if self.max_batch < 1:
            raise ValueError("max_batch must be >= 1")
        enabled = list(self.properties)
        for name in self.model_paths:
            if name not in enabled:
                enabled.append(name)
        self.properties = tuple(enabled)

    @classmethod
    def from_file(cls, path: str | Path) -> "ServiceConfig":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(
            host=data.get("host", "127.0.0.1"),
            port=int(data.get("port", 8100)),
            properties=tuple(data.get("properties", list(DEFAULT_PROPERTIES))),
            model_paths={str(k): str(v) for k, v in data.get("model_paths", {}).items()},
            max_batch=int(data.get("max_batch", 128)),
        )
