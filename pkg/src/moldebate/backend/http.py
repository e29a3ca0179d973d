"""OpenAI-compatible chat-completions client.

POSTs ``{base_url}/v1/chat/completions`` and returns
``choices[0].message.content``.  Transient failures (timeouts, connection
errors, 429, 5xx) retry with exponential backoff up to a cap; other HTTP
errors fail immediately.  The API key is read from an environment variable
named in the config.  An internal permit pool bounds in-flight requests to
the engine's parallelism.
"""

from __future__ import annotations

import os
import threading
import time

import requests

from ..errors import BackendError
from .base import ChatRequest

__all__ = ["HttpBackend"]

_TRANSIENT_STATUS = {429, 500, 502, 503, 504}


class HttpBackend:
    def __init__(
        self,
        base_url: str,
        model: str,
        api_key_env: str = "OPENAI_API_KEY",
        timeout: float = 120.0,
        max_retries: int = 3,
        backoff_base: float = 0.5,
        max_parallel: int = 8,
    ):
        self._endpoint = base_url.rstrip("/") + "/v1/chat/completions"
        self._model = model
        self._api_key_env = api_key_env
        self._timeout = timeout
        self._max_retries = max_retries
        self._backoff_base = backoff_base
        self._permits = threading.Semaphore(max_parallel)

    def complete(self, request: ChatRequest) -> str:
        payload = {
            "model": request.model or self._model,
            "messages": [
                {"role": role, "content": content} for role, content in request.messages
            ],
            "temperature": request.temperature,
        }
        if request.max_tokens is not None:
            payload["max_tokens"] = request.max_tokens
        headers = {"Content-Type": "application/json"}
        api_key = os.environ.get(self._api_key_env, "")
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"

        last_error = "no attempt made"
        for attempt in range(self._max_retries + 1):
            if attempt:
                time.sleep(self._backoff_base * 2 ** (attempt - 1))
            with self._permits:
                try:
                    response = requests.post(
                        self._endpoint, json=payload, headers=headers, timeout=self._timeout
                    )
                except (requests.Timeout, requests.ConnectionError) as exc:
                    last_error = f"{type(exc).__name__}: {exc}"
                    continue
            if response.status_code in _TRANSIENT_STATUS:
                last_error = f"HTTP {response.status_code}"
                continue
            if response.status_code != 200:
                raise BackendError(
                    f"backend rejected the request: HTTP {response.status_code} "
                    f"{response.text[:200]}"
                )
            try:
                return response.json()["choices"][0]["message"]["content"]
            except (KeyError, IndexError, TypeError, ValueError) as exc:
                raise BackendError(f"malformed backend response: {exc}")
        raise BackendError(
            f"backend unreachable after {self._max_retries + 1} attempts ({last_error})"
        )
