"""Chat-completion request model and the backend protocol."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Protocol

__all__ = ["ChatRequest", "RequestTag", "Backend"]


@dataclass(frozen=True)
class RequestTag:
    """Addresses a request for logging and for scripted mock lookup."""

    agent: str
    round: int
    phase: str

    def key(self) -> tuple[str, int, str]:
        return (self.agent, self.round, self.phase)


@dataclass(frozen=True)
class ChatRequest:
    """One chat completion: the first message is the system persona."""

    messages: tuple[tuple[str, str], ...]
    temperature: float = 0.7
    max_tokens: int | None = None
    model: str | None = None
    tag: RequestTag | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not self.messages:
            raise ValueError("a request needs at least one message")
        roles = {role for role, _ in self.messages}
        if not roles <= {"system", "user", "assistant"}:
            raise ValueError(f"unknown message roles: {roles - {'system', 'user', 'assistant'}}")
        if self.messages[0][0] != "system":
            raise ValueError("the first message must be the system persona")
        if not math.isfinite(self.temperature) or self.temperature < 0:
            raise ValueError("temperature must be finite and non-negative")


class Backend(Protocol):
    """Anything that can answer a :class:`ChatRequest` with assistant text."""

    def complete(self, request: ChatRequest) -> str: ...
