"""Multi-round proposal/critique/voting debate."""

from .engine import DebateEngine, aggregate_votes, run_debate, should_terminate
from .types import (
    Candidate,
    Critique,
    DebateConfig,
    DebateResult,
    DebateState,
    ScoreTriple,
)

__all__ = [
    "Candidate",
    "Critique",
    "DebateConfig",
    "DebateEngine",
    "DebateResult",
    "DebateState",
    "ScoreTriple",
    "aggregate_votes",
    "run_debate",
    "should_terminate",
]
