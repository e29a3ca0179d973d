"""Durable campaign records.

A run directory holds five files: ``config.json`` (the exact config bytes,
used for collision detection), ``transcript.jsonl`` (one debate event per
line), ``pool.jsonl`` (one line per candidate at insertion),
``metrics.jsonl`` (per-round snapshots), and ``result.json`` (final state,
written atomically).

The run id is a content hash of the semantic config: everything except
execution-only fields (output directory, parallelism), so identical
campaigns land on identical ids regardless of where or how wide they ran.
Timestamps live in dedicated fields (``ts``, ``started_at``, ``ended_at``)
so replay comparisons can strip them.
"""

from __future__ import annotations

import copy
import hashlib
import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

from .errors import PersistenceError, RunCollisionError

__all__ = ["RunRecord", "RunWriter", "open_run", "run_id_for", "semantic_config"]

_VOLATILE = (("paths", "output_dir"), ("debate", "parallelism"))


def semantic_config(config: dict) -> dict:
    """The config minus execution-only fields; the identity of a campaign."""
    stripped = copy.deepcopy(config)
    for section, key in _VOLATILE:
        if isinstance(stripped.get(section), dict):
            stripped[section].pop(key, None)
    return stripped


def run_id_for(config: dict) -> str:
    blob = json.dumps(semantic_config(config), sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:12]


@dataclass
class RunRecord:
    run_id: str
    config: dict  # semantic config echo
    corpus_fingerprint: str = ""
    started_at: float = field(default_factory=time.time)
    ended_at: float | None = None
    status: str = "running"

    def to_dict(self) -> dict:
        return {
            "run_id": self.run_id,
            "config": self.config,
            "corpus_fingerprint": self.corpus_fingerprint,
            "started_at": self.started_at,
            "ended_at": self.ended_at,
            "status": self.status,
        }


class RunWriter:
    """Single-writer handle for a run directory; readers may tail the
    JSONL files concurrently and always see a prefix-consistent log."""

    def __init__(self, directory: Path, record: RunRecord, append: bool):
        self.directory = directory
        self.record = record
        mode = "a" if append else "w"
        self._transcript = open(directory / "transcript.jsonl", mode, encoding="utf-8")
        self._pool = open(directory / "pool.jsonl", mode, encoding="utf-8")
        self._metrics = open(directory / "metrics.jsonl", mode, encoding="utf-8")

    @staticmethod
    def _encode(event: dict) -> str:
        try:
            return json.dumps(event, sort_keys=True, ensure_ascii=False)
        except (TypeError, ValueError) as exc:
            raise PersistenceError(f"event payload is not JSON-serializable: {exc}")

    def append_transcript(self, event: dict) -> None:
        self._transcript.write(self._encode(event) + "\n")

    def append_pool(self, entry: dict) -> None:
        self._pool.write(self._encode(entry) + "\n")

    def append_metrics(self, snapshot: dict) -> None:
        self._metrics.write(self._encode(snapshot) + "\n")

    def flush(self) -> None:
        for handle in (self._transcript, self._pool, self._metrics):
            handle.flush()
            os.fsync(handle.fileno())

    def finalize(self, result: dict, status: str = "completed") -> None:
        """Atomically write result.json and close the log files."""
        self.record.ended_at = time.time()
        self.record.status = status
        payload = dict(self.record.to_dict())
        payload.update(result)
        tmp = self.directory / "result.json.tmp"
        tmp.write_text(
            json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )
        os.replace(tmp, self.directory / "result.json")
        self.flush()
        self.close()

    def close(self) -> None:
        for handle in (self._transcript, self._pool, self._metrics):
            if not handle.closed:
                handle.close()


def open_run(
    base_dir: str | Path,
    config: dict,
    corpus_fingerprint: str = "",
    resume: bool = False,
) -> RunWriter:
    """Create (or re-open) the run directory for ``config``.

    The directory name is the run id.  An existing directory whose stored
    ``config.json`` bytes differ is a collision error; with matching bytes
    it re-opens in append mode when ``resume`` is set and errors otherwise.
    """
    base_dir = Path(base_dir)
    run_id = run_id_for(config)
    directory = base_dir / run_id
    config_bytes = (
        json.dumps(config, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    ).encode("utf-8")
    append = False
    if directory.exists():
        stored = (directory / "config.json").read_bytes()
        if stored != config_bytes:
            raise RunCollisionError(
                f"run {run_id} exists with different config bytes in {directory}"
            )
        if not resume:
            raise PersistenceError(
                f"run {run_id} already exists in {directory}; pass resume=True "
                "to append or choose a new output directory"
            )
        append = True
    else:
        directory.mkdir(parents=True)
        (directory / "config.json").write_bytes(config_bytes)
    record = RunRecord(
        run_id=run_id,
        config=semantic_config(config),
        corpus_fingerprint=corpus_fingerprint,
    )
    writer = RunWriter(directory, record, append=append)
    if not append:
        (directory / "result.json").write_text(
            json.dumps(record.to_dict(), sort_keys=True, indent=2) + "\n",
            encoding="utf-8",
        )
    return writer
