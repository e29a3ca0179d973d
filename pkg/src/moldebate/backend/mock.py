"""Deterministic scripted backend.

Responses are keyed by (agent, round, phase) from the request tag; the
script is immutable after load, so replies depend only on the key, never on
call order or thread interleaving.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Mapping

from ..errors import ScenarioError
from .base import ChatRequest

__all__ = ["MockBackend"]


class MockBackend:
    def __init__(self, script: Mapping[tuple[str, int, str], str]):
        self._script = dict(script)

    @classmethod
    def from_jsonl(cls, path: str | Path) -> "MockBackend":
        """Load a script file: one ``{"agent","round","phase","response"}``
        object per line."""
        script: dict[tuple[str, int, str], str] = {}
        with open(path, encoding="utf-8") as handle:
            for line_number, line in enumerate(handle, start=1):
                line = line.strip()
                if not line:
                    continue
                row = json.loads(line)
                key = (str(row["agent"]), int(row["round"]), str(row["phase"]))
                if key in script:
                    raise ScenarioError(f"{path}:{line_number}: duplicate script key {key}")
                script[key] = str(row["response"])
        return cls(script)

    def complete(self, request: ChatRequest) -> str:
        if request.tag is None:
            raise ScenarioError("mock backend needs a tagged request")
        key = request.tag.key()
        try:
            return self._script[key]
        except KeyError:
            raise ScenarioError(
                f"no scripted response for (agent={key[0]!r}, round={key[1]}, "
                f"phase={key[2]!r})"
            ) from None
