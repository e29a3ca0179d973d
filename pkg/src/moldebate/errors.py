"""Exception hierarchy shared across the package."""

from __future__ import annotations


class MolDebateError(Exception):
    """Base class for all package-specific errors."""


class ParseError(MolDebateError):
    """SMILES syntax error.

    Carries the byte offset of the offending character in ``offset``.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class MetricError(MolDebateError):
    """A metric is undefined for the given input (e.g. too few molecules)."""


class CorpusError(MolDebateError):
    """Corpus ingestion or lookup failure."""


class RetrievalError(MolDebateError):
    """Invalid retrieval request (e.g. empty query after tokenization)."""


class ProfileError(MolDebateError):
    """Profile construction failure (unknown mode, empty corpus, ...)."""


class BackendError(MolDebateError):
    """LLM backend failure after retries were exhausted."""


class ScenarioError(MolDebateError):
    """A scripted mock backend has no response for the requested key."""


class RenderError(MolDebateError):
    """Prompt template rendering failed (unbound placeholder)."""


class EmptyParseError(MolDebateError):
    """A structured LLM response yielded zero extractable entries."""


class BallotParseError(MolDebateError):
    """A voting ballot could not be parsed at all."""


class OracleError(MolDebateError):
    """Property oracle failure (unknown property, unreachable service)."""


class OracleSlotError(OracleError):
    """The oracle reported per-molecule failures inside a batch.

    ``slot_errors`` is aligned with the request: ``None`` for healthy slots,
    an error string for failed ones.
    """

    def __init__(self, message: str, slot_errors: list):
        super().__init__(message)
        self.slot_errors = slot_errors


class PersistenceError(MolDebateError):
    """Run-directory I/O failure."""


class RunCollisionError(PersistenceError):
    """A run directory exists whose stored config bytes differ."""


class ConfigError(MolDebateError):
    """Invalid campaign configuration (usage error, CLI exit code 2)."""
