from __future__ import annotations

import json
import subprocess
import sys
import textwrap

import pytest

from moldebate.errors import PersistenceError, RunCollisionError
from moldebate.persistence import open_run, run_id_for, semantic_config

CONFIG = {
    "task": {"task_id": "t", "objective": "bioactivity"},
    "debate": {"n_scientists": 2, "seed": 7, "parallelism": 4},
    "paths": {"publications": "pubs.jsonl", "output_dir": "/tmp/x"},
}


def test_fresh_run_creates_five_files(tmp_path):
    writer = open_run(tmp_path, CONFIG)
    names = sorted(p.name for p in writer.directory.iterdir())
    assert names == [
        "config.json",
        "metrics.jsonl",
        "pool.jsonl",
        "result.json",
        "transcript.jsonl",
    ]
    writer.close()


def test_same_config_same_run_id():
    assert run_id_for(CONFIG) == run_id_for(json.loads(json.dumps(CONFIG)))


def test_run_id_ignores_execution_fields():
    other = json.loads(json.dumps(CONFIG))
    other["debate"]["parallelism"] = 1
    other["paths"]["output_dir"] = "/somewhere/else"
    assert run_id_for(other) == run_id_for(CONFIG)
    assert "parallelism" not in semantic_config(CONFIG)["debate"]


def test_run_id_changes_with_seed():
    other = json.loads(json.dumps(CONFIG))
    other["debate"]["seed"] = 8
    assert run_id_for(other) != run_id_for(CONFIG)


def test_existing_run_requires_resume(tmp_path):
    open_run(tmp_path, CONFIG).close()
    with pytest.raises(PersistenceError):
        open_run(tmp_path, CONFIG)
    writer = open_run(tmp_path, CONFIG, resume=True)
    writer.close()


def test_tampered_config_collides_on_resume(tmp_path):
    writer = open_run(tmp_path, CONFIG)
    writer.close()
    config_path = writer.directory / "config.json"
    raw = bytearray(config_path.read_bytes())
    raw[raw.index(ord("t"))] = ord("u")  # flip one byte
    config_path.write_bytes(bytes(raw))
    with pytest.raises(RunCollisionError):
        open_run(tmp_path, CONFIG, resume=True)


def test_appends_preserve_order(tmp_path):
    writer = open_run(tmp_path, CONFIG)
    for i in range(3):
        writer.append_transcript({"round": i, "phase": "proposal", "agent": None, "payload": {}})
    writer.flush()
    lines = (writer.directory / "transcript.jsonl").read_text().splitlines()
    assert [json.loads(line)["round"] for line in lines] == [0, 1, 2]
    writer.close()


def test_non_serializable_payload_rejected(tmp_path):
    writer = open_run(tmp_path, CONFIG)
    with pytest.raises(PersistenceError):
        writer.append_transcript({"payload": object()})
    writer.close()


def test_finalize_writes_result_atomically(tmp_path):
    writer = open_run(tmp_path, CONFIG)
    writer.finalize({"ranking": ["CCO"]}, status="completed")
    result = json.loads((writer.directory / "result.json").read_text())
    assert result["status"] == "completed"
    assert result["ranking"] == ["CCO"]
    assert result["run_id"] == run_id_for(CONFIG)
    assert "parallelism" not in result["config"]["debate"]
    assert not (writer.directory / "result.json.tmp").exists()


def test_flushed_lines_survive_process_kill(tmp_path):
    """Write three events, flush, then die hard; the log must be readable."""
    script = textwrap.dedent(
        f"""
        import os
        from moldebate.persistence import open_run
        writer = open_run({str(tmp_path)!r}, {CONFIG!r})
        for i in range(3):
            writer.append_transcript({{"round": i, "phase": "p", "agent": None, "payload": {{}}}})
        writer.flush()
        os._exit(137)  # simulate a crash: no close, no finalize
        """
    )
    process = subprocess.run([sys.executable, "-c", script], capture_output=True)
    assert process.returncode == 137
    run_dir = tmp_path / run_id_for(CONFIG)
    lines = (run_dir / "transcript.jsonl").read_text().splitlines()
    assert len(lines) == 3
    assert [json.loads(line)["round"] for line in lines] == [0, 1, 2]
