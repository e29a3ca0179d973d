"""Campaign configuration and end-to-end execution.

A campaign is one declarative JSON file: task, profile mode, debate
hyperparameters, backend and oracle wiring, corpus paths, output directory.
Relative paths resolve against the config file's directory, so scenario
bundles are relocatable.  Execution: ingest corpus -> select scientists ->
build profiles -> run the debate -> score the final pool with the oracle
(when the task names a property) -> persist everything under
``<output_dir>/<run_id>/``.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from pathlib import Path

from .backend import HttpBackend, MockBackend
from .corpus import corpus_fingerprint, ingest
from .debate import DebateConfig, DebateEngine, DebateResult
from .errors import ConfigError, MolDebateError
from .metrics import MetricConfig, ScoredCall, topk_auc
from .oracle import ConstraintSet, HttpOracle, MockOracle, check_constraints, property_spec
from .persistence import open_run
from .profiles import (
    PROFILE_MODES,
    ProfileLimits,
    TaskSpec,
    build_profiles,
    select_scientists,
)

__all__ = ["CampaignConfig", "load_config", "run_campaign"]

_DEFAULTS: dict = {
    "task": {
        "id": "task",
        "objective": "bioactivity",
        "description": "",
        "keywords": [],
        "seed": None,
        "property": None,
        "constraints": {"min_qed": 0.6, "max_sa": 4.0, "min_sim": 0.6},
    },
    "profile": {
        "mode": "full",
        "max_pubs": 5,
        "max_mols": 10,
        "keyword_count": 10,
        "context_budget": 40000,
        "retrieval_top_m": 30,
    },
    "debate": {
        "n_scientists": 50,
        "proposals_per_agent": 30,
        "votes_per_agent": 5,
        "max_rounds": 20,
        "candidate_budget": 1000,
        "self_critique_enabled": True,
        "self_critique_oracle_property": None,
        "cross_sample": 10,
        "ballot_cap": 50,
        "parallelism": 4,
        "seed": 0,
    },
    "backend": {
        "kind": "mock",
        "script": None,
        "endpoint": None,
        "model": None,
        "temperature": 0.7,
        "max_tokens": None,
        "api_key_env": "OPENAI_API_KEY",
        "max_retries": 3,
    },
    "oracle": {
        "kind": "none",
        "endpoint": None,
        "seed": 0,
        "pinned": {},
    },
    "metrics": {
        "circle_threshold": 0.75,
        "auc_k": 10,
        "oracle_budget": 1000,
    },
    "paths": {
        "publications": None,
        "molecules": None,
        "output_dir": "runs",
        "templates": None,
    },
}


def _merge_defaults(raw: dict) -> dict:
    merged = copy.deepcopy(_DEFAULTS)
    for section, values in raw.items():
        if section not in merged:
            raise ConfigError(f"unknown config section {section!r}")
        if not isinstance(values, dict):
            raise ConfigError(f"config section {section!r} must be an object")
        for key, value in values.items():
            if key not in merged[section]:
                raise ConfigError(f"unknown config key {section}.{key}")
            merged[section][key] = value
    return merged


@dataclass
class CampaignConfig:
    """Validated campaign config plus the normalized dict it came from."""

    data: dict
    base_dir: Path

    def _path(self, value: str) -> Path:
        path = Path(value)
        return path if path.is_absolute() else self.base_dir / path

    @property
    def task(self) -> TaskSpec:
        section = self.data["task"]
        constraints = None
        if section["objective"] == "lead_optimization":
            raw = section["constraints"]
            constraints = ConstraintSet(
                seed=section["seed"],
                min_qed=float(raw["min_qed"]),
                max_sa=float(raw["max_sa"]),
                min_sim=float(raw["min_sim"]),
            )
        return TaskSpec(
            task_id=str(section["id"]),
            objective=str(section["objective"]),
            description=str(section["description"]),
            keywords=tuple(str(k) for k in section["keywords"]),
            seed=section["seed"],
            oracle_property=section["property"],
            constraints=constraints,
        )

    @property
    def debate(self) -> DebateConfig:
        return DebateConfig(**self.data["debate"])

    @property
    def limits(self) -> ProfileLimits:
        section = self.data["profile"]
        return ProfileLimits(
            max_pubs=int(section["max_pubs"]),
            max_mols=int(section["max_mols"]),
            keyword_count=int(section["keyword_count"]),
            context_budget=int(section["context_budget"]),
            retrieval_top_m=int(section["retrieval_top_m"]),
        )

    @property
    def metric_config(self) -> MetricConfig:
        section = self.data["metrics"]
        return MetricConfig(
            circle_threshold=float(section["circle_threshold"]),
            auc_k=int(section["auc_k"]),
            oracle_budget=int(section["oracle_budget"]),
        )

    @property
    def profile_mode(self) -> str:
        return str(self.data["profile"]["mode"])

    @property
    def publications_path(self) -> Path:
        return self._path(self.data["paths"]["publications"])

    @property
    def molecules_path(self) -> Path | None:
        value = self.data["paths"]["molecules"]
        return self._path(value) if value else None

    @property
    def output_dir(self) -> Path:
        return self._path(self.data["paths"]["output_dir"])

    @property
    def template_dir(self) -> str | None:
        value = self.data["paths"]["templates"]
        return str(self._path(value)) if value else None

    def build_backend(self):
        section = self.data["backend"]
        if section["kind"] == "mock":
            if not section["script"]:
                raise ConfigError("mock backend needs backend.script")
            return MockBackend.from_jsonl(self._path(section["script"]))
        if section["kind"] == "http":
            if not section["endpoint"]:
                raise ConfigError("http backend needs backend.endpoint")
            return HttpBackend(
                base_url=str(section["endpoint"]),
                model=str(section["model"] or ""),
                api_key_env=str(section["api_key_env"]),
                max_retries=int(section["max_retries"]),
                max_parallel=int(self.data["debate"]["parallelism"]),
            )
        raise ConfigError(f"unknown backend kind {section['kind']!r}")

    def build_oracle(self):
        section = self.data["oracle"]
        if section["kind"] == "none":
            return None
        if section["kind"] == "mock":
            pinned = {}
            for key, value in dict(section["pinned"]).items():
                name, _, smiles = key.partition("|")
                pinned[(name, smiles) if smiles else name] = float(value)
            return MockOracle(seed=int(section["seed"]), pinned=pinned)
        if section["kind"] == "http":
            if not section["endpoint"]:
                raise ConfigError("http oracle needs oracle.endpoint")
            return HttpOracle(base_url=str(section["endpoint"]))
        raise ConfigError(f"unknown oracle kind {section['kind']!r}")

    def validate(self) -> None:
        task = self.data["task"]
        if task["objective"] not in ("protein_target", "bioactivity", "lead_optimization"):
            raise ConfigError(f"unknown objective {task['objective']!r}")
        if task["objective"] == "lead_optimization" and not task["seed"]:
            raise ConfigError("lead_optimization requires task.seed")
        if not task["keywords"]:
            raise ConfigError("task.keywords must be non-empty")
        if self.data["profile"]["mode"] not in PROFILE_MODES:
            raise ConfigError(f"unknown profile mode {self.data['profile']['mode']!r}")
        if not self.data["paths"]["publications"]:
            raise ConfigError("paths.publications is required")
        for name in ("publications", "molecules"):
            value = self.data["paths"][name]
            if value and not self._path(value).exists():
                raise ConfigError(f"paths.{name} does not exist: {self._path(value)}")
        backend = self.data["backend"]
        if backend["kind"] == "mock" and backend["script"]:
            if not self._path(backend["script"]).exists():
                raise ConfigError(
                    f"backend.script does not exist: {self._path(backend['script'])}"
                )
        if task["property"] is not None:
            property_spec(str(task["property"]))  # raises on unknown names
        try:
            self.task
            self.debate
            self.metric_config
        except (ValueError, TypeError) as exc:
            raise ConfigError(str(exc))


def load_config(path: str | Path, overrides: dict | None = None) -> CampaignConfig:
    """Load, default-fill, override, and validate a campaign config file.

    ``overrides`` maps dotted keys (``debate.parallelism``) to values; CLI
    flags land here and win over file values.
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}")
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    merged = _merge_defaults(raw)
    for dotted, value in (overrides or {}).items():
        section, _, key = dotted.partition(".")
        if section not in merged or key not in merged[section]:
            raise ConfigError(f"unknown override {dotted!r}")
        merged[section][key] = value
    config = CampaignConfig(data=merged, base_dir=path.parent.resolve())
    config.validate()
    return config


def _best(scores: list[float], direction: str, count: int) -> list[float]:
    ordered = sorted(scores, reverse=(direction == "maximize"))
    return ordered[:count]


def run_campaign(config: CampaignConfig) -> tuple[dict, DebateResult]:
    """Execute one campaign end-to-end; returns (summary, debate result).

    On backend/oracle hard failure the partially written transcript is
    preserved and result.json is finalized with status "aborted" before the
    error propagates.
    """
    index, ingest_report = ingest(
        config.publications_path, config.molecules_path
    )
    corpus_paths = [config.publications_path]
    if config.molecules_path:
        corpus_paths.append(config.molecules_path)
    fingerprint = corpus_fingerprint(*corpus_paths)

    task = config.task
    debate_config = config.debate
    backend = config.build_backend()
    oracle = config.build_oracle()

    scientists = select_scientists(
        index, task, n=debate_config.n_scientists, top_m=config.limits.retrieval_top_m
    )
    if len(scientists) < debate_config.n_scientists:
        debate_config = DebateConfig(
            **{**config.data["debate"], "n_scientists": len(scientists)}
        )
    profiles = build_profiles(
        index,
        scientists,
        task,
        config.profile_mode,
        config.limits,
        backend=backend,
        rng_seed=debate_config.seed,
    )

    writer = open_run(config.output_dir, config.data, corpus_fingerprint=fingerprint)
    writer.append_transcript(
        {
            "ts": writer.record.started_at,
            "round": 0,
            "phase": "setup",
            "agent": None,
            "payload": {
                "scientists": [s.id for s in scientists],
                "profiles": [p.to_dict() for p in profiles],
                "ingest": {
                    "publications": ingest_report.publications_accepted,
                    "molecules_accepted": ingest_report.molecules_accepted,
                    "molecules_rejected": ingest_report.molecules_rejected,
                },
            },
        }
    )
    writer.flush()

    engine = DebateEngine(
        debate_config,
        task,
        profiles,
        backend,
        oracle=oracle,
        writer=writer,
        metric_config=config.metric_config,
        template_dir=config.template_dir,
        temperature=float(config.data["backend"]["temperature"]),
        model=config.data["backend"]["model"],
        max_tokens=config.data["backend"]["max_tokens"],
    )
    try:
        result = engine.run()
        payload, summary = _score_and_summarize(config, task, oracle, result)
        payload["result"] = result.to_dict()
        payload["summary"] = summary
        writer.finalize(payload, status="completed")
    except MolDebateError as exc:
        writer.finalize({"error": str(exc)}, status="aborted")
        raise
    summary["run_id"] = writer.record.run_id
    summary["run_dir"] = str(writer.directory)
    return summary, result


def _score_and_summarize(
    config: CampaignConfig, task: TaskSpec, oracle, result: DebateResult
) -> tuple[dict, dict]:
    metric_config = config.metric_config
    last_metrics = result.round_metrics[-1] if result.round_metrics else {}
    summary: dict = {
        "pool_size": len(result.pool),
        "rounds": result.rounds_run,
        "termination": result.termination,
        "int_div": last_metrics.get("int_div"),
        "num_circles": last_metrics.get("num_circles"),
    }
    payload: dict = {}
    if oracle is not None and task.oracle_property:
        spec = property_spec(task.oracle_property)
        budget = metric_config.oracle_budget
        pool_order = [c.canonical for c in result.pool][:budget]
        scores = oracle.score_batch(task.oracle_property, pool_order)
        calls = [
            ScoredCall(call_index=i, molecule=smiles, score=score)
            for i, (smiles, score) in enumerate(zip(pool_order, scores), start=1)
        ]
        payload["oracle_property"] = task.oracle_property
        payload["scored_calls"] = [
            {"call_index": c.call_index, "molecule": c.molecule, "score": c.score}
            for c in calls
        ]
        best = _best(scores, spec.direction, 10)
        summary["top1"] = best[0]
        summary["top10_mean"] = sum(best) / len(best)
        if spec.direction == "maximize":
            summary["topk_auc"] = topk_auc(
                calls, k=metric_config.auc_k, budget=budget
            )
    if (
        oracle is not None
        and task.objective == "lead_optimization"
        and task.constraints is not None
    ):
        reports = []
        for canonical in result.ranking[:10]:
            report = check_constraints(canonical, task.constraints, oracle)
            reports.append(
                {
                    "candidate": report.candidate,
                    "overall": report.overall,
                    "checks": [
                        {
                            "name": check.name,
                            "comparator": check.comparator,
                            "threshold": check.threshold,
                            "value": check.value,
                            "verdict": check.verdict,
                        }
                        for check in report.checks
                    ],
                }
            )
        payload["constraint_reports"] = reports
        summary["constraints_passed"] = sum(
            1 for r in reports if r["overall"] == "pass"
        )
    return payload, summary
