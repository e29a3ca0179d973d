"""Debate domain types: config, candidates, scores, state, result."""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class DebateConfig:
    """Collaboration hyperparameters.

    Defaults: 50 scientists each proposing 30 candidates per round, voting
    for their top 5, at most 20 rounds, stopping once 1000 candidates have
    accumulated.
    """

    n_scientists: int = 50
    proposals_per_agent: int = 30  # k
    votes_per_agent: int = 5  # t, clamped to the pool at vote time
    max_rounds: int = 20
    candidate_budget: int = 1000
    self_critique_enabled: bool = True
    self_critique_oracle_property: str | None = None
    cross_sample: int = 10
    ballot_cap: int = 50
    parallelism: int = 4
    seed: int = 0

    def __post_init__(self) -> None:
        for name in (
            "n_scientists",
            "proposals_per_agent",
            "votes_per_agent",
            "max_rounds",
            "candidate_budget",
            "cross_sample",
            "ballot_cap",
            "parallelism",
        ):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")


@dataclass(frozen=True)
class ScoreTriple:
    task_relevance: float
    synthetic_feasibility: float
    novelty: float

    def __post_init__(self) -> None:
        for name in ("task_relevance", "synthetic_feasibility", "novelty"):
            value = getattr(self, name)
            if not (math.isfinite(value) and 0.0 <= value <= 1.0):
                raise ValueError(f"{name} must be in [0, 1], got {value}")

    @property
    def mean(self) -> float:
        return (self.task_relevance + self.synthetic_feasibility + self.novelty) / 3.0

    @classmethod
    def clamped(cls, raw: tuple[float, float, float]) -> "ScoreTriple":
        """Build from raw parsed values, clamping each into [0, 1]."""
        t, s, n = (min(1.0, max(0.0, float(v))) for v in raw)
        return cls(t, s, n)

    def to_dict(self) -> dict:
        return {
            "task_relevance": self.task_relevance,
            "synthetic_feasibility": self.synthetic_feasibility,
            "novelty": self.novelty,
        }


@dataclass(frozen=True)
class Critique:
    critic: str
    round: int
    text: str
    suggestion: str | None = None  # suggested replacement, recorded only

    def to_dict(self) -> dict:
        return {
            "critic": self.critic,
            "round": self.round,
            "text": self.text,
            "suggestion": self.suggestion,
        }


@dataclass
class Candidate:
    """One pooled molecule with full provenance."""

    canonical: str
    proposer: str
    round_proposed: int
    rationales: list[dict] = field(default_factory=list)  # {agent, round, text}
    critiques: list[Critique] = field(default_factory=list)
    scores: dict[str, ScoreTriple] = field(default_factory=dict)
    votes: set[str] = field(default_factory=set)
    replaced_from: str | None = None  # this entry replaced that canonical
    replaced_by: str | None = None  # that canonical superseded this entry

    @property
    def vote_count(self) -> int:
        return len(self.votes)

    def mean_score(self) -> float:
        """Mean over the scoring agents' triple means; 0.0 when unscored."""
        if not self.scores:
            return 0.0
        values = [self.scores[agent].mean for agent in sorted(self.scores)]
        return math.fsum(values) / len(values)

    def to_dict(self) -> dict:
        return {
            "canonical": self.canonical,
            "proposer": self.proposer,
            "round_proposed": self.round_proposed,
            "rationales": list(self.rationales),
            "critiques": [c.to_dict() for c in self.critiques],
            "scores": {agent: t.to_dict() for agent, t in sorted(self.scores.items())},
            "votes": sorted(self.votes),
            "vote_count": self.vote_count,
            "mean_score": self.mean_score(),
            "replaced_from": self.replaced_from,
            "replaced_by": self.replaced_by,
        }


TERMINATION_REASONS = ("max_rounds", "budget_reached")


@dataclass
class DebateState:
    round: int = 0
    pool: dict[str, Candidate] = field(default_factory=dict)  # insertion order
    terminated: str | None = None

    def add_candidate(self, candidate: Candidate) -> bool:
        """Insert if new; the pool never shrinks."""
        if candidate.canonical in self.pool:
            return False
        self.pool[candidate.canonical] = candidate
        return True


@dataclass
class DebateResult:
    task_id: str
    termination: str
    rounds_run: int
    pool: list[Candidate]
    ranking: list[str]  # canonical SMILES, final aggregation order
    transcript: list[dict]
    round_metrics: list[dict]
    stats: dict

    def ranked_candidates(self) -> list[Candidate]:
        by_canonical = {c.canonical: c for c in self.pool}
        return [by_canonical[c] for c in self.ranking]

    def to_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "termination": self.termination,
            "rounds_run": self.rounds_run,
            "pool": [c.to_dict() for c in self.pool],
            "ranking": self.ranking,
            "round_metrics": self.round_metrics,
            "stats": self.stats,
        }
