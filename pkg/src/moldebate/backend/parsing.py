"""Machine-reading of structured LLM replies.

Every template asks for fenced JSON, but real models drift, so each parser
has two tiers: fenced (or raw) JSON first, then a line-based fallback where
one exists.  SMILES validity is never checked here; the debate layer owns
validation and the repair loop.
"""

from __future__ import annotations

import json
import re
import warnings
from dataclasses import dataclass

from ..chem import parse as parse_smiles
from ..errors import BallotParseError, EmptyParseError

__all__ = ["CritiqueEntry", "parse_proposals", "parse_critiques", "parse_ballot"]

_FENCE = re.compile(r"```(?:[a-zA-Z]+)?\s*\n?(.*?)```", re.DOTALL)
_SMILES_LINE = re.compile(r"^\s*(?:[-*>\d.)\s]*)SMILES\s*:\s*(\S+)\s*$", re.IGNORECASE)
_RATIONALE_PREFIX = re.compile(r"^rationale\s*:\s*", re.IGNORECASE)


def _json_blobs(text: str):
    for match in _FENCE.finditer(text):
        yield match.group(1)
    stripped = text.strip()
    if stripped.startswith("[") or stripped.startswith("{"):
        yield stripped


def parse_proposals(text: str, k: int) -> list[tuple[str, str]]:
    """Extract up to ``k`` (smiles, rationale) pairs, in reply order.

    Raises :class:`~moldebate.errors.EmptyParseError` when nothing can be
    extracted, which triggers the repair re-prompt upstream.
    """
    for blob in _json_blobs(text):
        try:
            data = json.loads(blob)
        except json.JSONDecodeError:
            continue
        if not isinstance(data, list):
            continue
        entries = []
        for item in data:
            if isinstance(item, dict) and "smiles" in item:
                entries.append((str(item["smiles"]), str(item.get("rationale", ""))))
            elif isinstance(item, str):
                entries.append((item, ""))
        if entries:
            return entries[:k]
    # Fallback: "SMILES: <token>" lines, rationale from the lines after.
    entries = []
    current: list[str] | None = None
    for line in text.splitlines():
        match = _SMILES_LINE.match(line)
        if match:
            if current is not None:
                entries.append((current[0], current[1]))
            current = [match.group(1), ""]
        elif current is not None:
            tail = _RATIONALE_PREFIX.sub("", line.strip())
            if tail:
                current[1] = f"{current[1]} {tail}".strip()
    if current is not None:
        entries.append((current[0], current[1]))
    if not entries:
        raise EmptyParseError("no proposals could be extracted from the reply")
    return entries[:k]


@dataclass(frozen=True)
class CritiqueEntry:
    smiles: str
    critique: str
    replacement: str | None = None


def parse_critiques(text: str) -> list[CritiqueEntry]:
    """Extract per-candidate critiques with optional replacement SMILES."""
    for blob in _json_blobs(text):
        try:
            data = json.loads(blob)
        except json.JSONDecodeError:
            continue
        if not isinstance(data, list):
            continue
        entries = []
        for item in data:
            if not isinstance(item, dict) or "smiles" not in item:
                continue
            replacement = item.get("replacement") or item.get("suggestion")
            entries.append(
                CritiqueEntry(
                    smiles=str(item["smiles"]),
                    critique=str(item.get("critique", "")),
                    replacement=str(replacement) if replacement else None,
                )
            )
        if entries:
            return entries
    raise EmptyParseError("no critiques could be extracted from the reply")


_SCORE_ALIASES = {
    "task_relevance": ("task_relevance", "relevance"),
    "synthetic_feasibility": ("synthetic_feasibility", "feasibility"),
    "novelty": ("novelty",),
}


def _score_triple(value: object) -> tuple[float, float, float] | None:
    if not isinstance(value, dict):
        return None
    scores = []
    for canonical_name, aliases in _SCORE_ALIASES.items():
        for alias in aliases:
            if alias in value:
                try:
                    scores.append(float(value[alias]))
                except (TypeError, ValueError):
                    return None
                break
        else:
            return None
    return (scores[0], scores[1], scores[2])


def parse_ballot(
    text: str, expected: list[str]
) -> dict[str, tuple[float, float, float]]:
    """Parse a voting reply into canonical SMILES -> raw score triple.

    Keys are canonicalized and matched against ``expected`` (canonical
    forms); unmatched or unparseable keys are dropped with a warning.
    Scores pass through unclamped; clamping is the debate layer's job.
    Raises :class:`~moldebate.errors.BallotParseError` when no JSON object
    can be recovered at all.
    """
    expected_set = set(expected)
    for blob in _json_blobs(text):
        try:
            data = json.loads(blob)
        except json.JSONDecodeError:
            continue
        if not isinstance(data, dict):
            continue
        ballot: dict[str, tuple[float, float, float]] = {}
        for key, value in data.items():
            triple = _score_triple(value)
            if triple is None:
                warnings.warn(f"ballot entry {key!r} has no usable scores; dropped")
                continue
            try:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    canonical = parse_smiles(str(key)).canonical
            except Exception:
                warnings.warn(f"ballot key {key!r} is not a valid SMILES; dropped")
                continue
            if canonical not in expected_set:
                warnings.warn(f"ballot key {key!r} matches no candidate; dropped")
                continue
            ballot[canonical] = triple
        return ballot
    raise BallotParseError("no ballot object could be extracted from the reply")
