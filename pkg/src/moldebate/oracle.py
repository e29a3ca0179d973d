"""Property-scoring clients and the lead-optimization constraint checker.

The wire protocol (shared with the standalone scoring service):

* ``POST /score`` with ``{"property": "qed", "smiles": ["...", ...]}``
  returns ``{"scores": [...], "errors": [...]}``, both aligned with the
  request; a failed slot has a null score and an error string.
* ``GET /health`` returns ``{"status": "ok", "properties": [...]}``.

The mock oracle is pure: scores are a seeded hash of (property, canonical
SMILES) mapped into the property's range, optionally pinned per property or
per molecule for tests and scripted campaigns.  Seed similarity is always
computed locally (it is plain graph math), never delegated.
"""

from __future__ import annotations

import hashlib
import time
import warnings
from dataclasses import dataclass
from typing import Sequence

import requests

from .chem import morgan_fingerprint, parse, tanimoto
from .errors import OracleError, OracleSlotError

__all__ = [
    "PropertySpec",
    "property_spec",
    "MockOracle",
    "HttpOracle",
    "ConstraintSet",
    "ConstraintCheck",
    "ConstraintReport",
    "check_constraints",
]


@dataclass(frozen=True)
class PropertySpec:
    name: str
    direction: str  # "maximize" or "minimize"
    low: float
    high: float


_BASE_PROPERTIES = {
    "qed": PropertySpec("qed", "maximize", 0.0, 1.0),
    "sa": PropertySpec("sa", "minimize", 1.0, 10.0),
    "gsk3b": PropertySpec("gsk3b", "maximize", 0.0, 1.0),
    "drd2": PropertySpec("drd2", "maximize", 0.0, 1.0),
    "jnk3": PropertySpec("jnk3", "maximize", 0.0, 1.0),
}


def property_spec(name: str) -> PropertySpec:
    """Resolve a property name; ``docking:<target>`` and
    ``affinity:<target>`` are protocol slots with documented mock ranges."""
    if name in _BASE_PROPERTIES:
        return _BASE_PROPERTIES[name]
    prefix, _, target = name.partition(":")
    if target:
        if prefix == "docking":
            return PropertySpec(name, "minimize", -15.0, 0.0)
        if prefix == "affinity":
            return PropertySpec(name, "minimize", -12.0, 0.0)
    raise OracleError(f"unknown property {name!r}")


def _canonical(smiles: str) -> str:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return parse(smiles).canonical


class MockOracle:
    """Deterministic stand-in oracle.

    ``pinned`` maps a property name (pinning every molecule) or a
    ``(property, canonical SMILES)`` pair to a fixed score.
    """

    def __init__(self, seed: int = 0, pinned: dict | None = None, max_batch: int = 128):
        self._seed = seed
        self._pinned = dict(pinned or {})
        self.max_batch = max_batch

    def _pseudo_score(self, spec: PropertySpec, canonical: str) -> float:
        digest = hashlib.sha256(
            f"{self._seed}:{spec.name}:{canonical}".encode()
        ).digest()
        fraction = int.from_bytes(digest[:8], "big") / 2**64
        return spec.low + fraction * (spec.high - spec.low)

    def score_batch(self, property_name: str, smiles: Sequence[str]) -> list[float]:
        spec = property_spec(property_name)
        scores = []
        for entry in smiles:
            try:
                canonical = _canonical(entry)
            except Exception as exc:
                raise OracleError(f"unparseable SMILES {entry!r}: {exc}")
            if (property_name, canonical) in self._pinned:
                scores.append(float(self._pinned[(property_name, canonical)]))
            elif property_name in self._pinned:
                scores.append(float(self._pinned[property_name]))
            else:
                scores.append(self._pseudo_score(spec, canonical))
        return scores

    def health(self) -> dict:
        return {"status": "ok", "properties": sorted(_BASE_PROPERTIES)}


class HttpOracle:
    """Wire client for the oracle scoring service."""

    def __init__(
        self,
        base_url: str,
        timeout: float = 60.0,
        max_retries: int = 3,
        backoff_base: float = 0.5,
        max_batch: int = 128,
    ):
        self._base_url = base_url.rstrip("/")
        self._timeout = timeout
        self._max_retries = max_retries
        self._backoff_base = backoff_base
        self.max_batch = max_batch

    def _post_score(self, property_name: str, smiles: list[str]) -> dict:
        payload = {"property": property_name, "smiles": smiles}
        last_error = "no attempt made"
        for attempt in range(self._max_retries + 1):
            if attempt:
                time.sleep(self._backoff_base * 2 ** (attempt - 1))
            try:
                response = requests.post(
                    f"{self._base_url}/score", json=payload, timeout=self._timeout
                )
            except (requests.Timeout, requests.ConnectionError) as exc:
                last_error = f"{type(exc).__name__}: {exc}"
                continue
            if response.status_code in {429, 500, 502, 503, 504}:
                last_error = f"HTTP {response.status_code}"
                continue
            if response.status_code != 200:
                raise OracleError(
                    f"oracle rejected the request: HTTP {response.status_code} "
                    f"{response.text[:200]}"
                )
            return response.json()
        raise OracleError(
            f"oracle unreachable after {self._max_retries + 1} attempts ({last_error})"
        )

    def score_batch_detailed(
        self, property_name: str, smiles: Sequence[str]
    ) -> tuple[list[float | None], list[str | None]]:
        """Order-aligned (scores, errors); failed slots are None + message.

        Batches beyond ``max_batch`` are split transparently (the service is
        stateless, so concatenation is exact).
        """
        property_spec(property_name)
        smiles = list(smiles)
        scores: list[float | None] = []
        errors: list[str | None] = []
        for offset in range(0, len(smiles), self.max_batch):
            chunk = smiles[offset : offset + self.max_batch]
            body = self._post_score(property_name, chunk)
            chunk_scores = body.get("scores")
            chunk_errors = body.get("errors")
            if (
                not isinstance(chunk_scores, list)
                or not isinstance(chunk_errors, list)
                or len(chunk_scores) != len(chunk)
                or len(chunk_errors) != len(chunk)
            ):
                raise OracleError("oracle response is not aligned with the request")
            scores.extend(
                float(s) if s is not None else None for s in chunk_scores
            )
            errors.extend(str(e) if e is not None else None for e in chunk_errors)
        return scores, errors

    def score_batch(self, property_name: str, smiles: Sequence[str]) -> list[float]:
        """Strict variant: any per-molecule failure raises
        :class:`~moldebate.errors.OracleSlotError` (never a silent zero)."""
        scores, errors = self.score_batch_detailed(property_name, smiles)
        if any(error is not None for error in errors):
            failed = [i for i, error in enumerate(errors) if error is not None]
            raise OracleSlotError(
                f"oracle failed for slots {failed}", slot_errors=errors
            )
        return [s for s in scores if s is not None]

    def health(self) -> dict:
        try:
            response = requests.get(f"{self._base_url}/health", timeout=self._timeout)
        except (requests.Timeout, requests.ConnectionError) as exc:
            raise OracleError(f"oracle health check failed: {exc}")
        if response.status_code != 200:
            raise OracleError(f"oracle health check failed: HTTP {response.status_code}")
        return response.json()


@dataclass(frozen=True)
class ConstraintSet:
    """Lead-optimization gate: QED >= min_qed, SA <= max_sa, seed
    similarity >= min_sim."""

    seed: str
    min_qed: float = 0.6
    max_sa: float = 4.0
    min_sim: float = 0.6

    def __post_init__(self) -> None:
        object.__setattr__(self, "seed", _canonical(self.seed))


@dataclass(frozen=True)
class ConstraintCheck:
    name: str
    comparator: str  # ">=" or "<="
    threshold: float
    value: float | None
    verdict: str  # "pass" | "fail" | "indeterminate"


@dataclass(frozen=True)
class ConstraintReport:
    candidate: str
    checks: tuple[ConstraintCheck, ...]
    overall: str  # "pass" | "fail" | "indeterminate"

    @property
    def passed(self) -> bool:
        return self.overall == "pass"


def _verdict(value: float, comparator: str, threshold: float) -> str:
    if comparator == ">=":
        return "pass" if value >= threshold else "fail"
    return "pass" if value <= threshold else "fail"


def check_constraints(candidate: str, constraints: ConstraintSet, oracle) -> ConstraintReport:
    """Evaluate the lead-optimization constraints for one candidate.

    Seed similarity is computed locally from Morgan fingerprints; QED and SA
    come from the oracle.  An oracle failure yields an ``indeterminate``
    verdict for the affected checks (and for the report unless another
    check already failed outright).
    """
    candidate_canonical = _canonical(candidate)
    sim = tanimoto(
        morgan_fingerprint(parse(candidate_canonical)),
        morgan_fingerprint(parse(constraints.seed)),
    )
    checks = [
        ConstraintCheck(
            name="sim",
            comparator=">=",
            threshold=constraints.min_sim,
            value=sim,
            verdict=_verdict(sim, ">=", constraints.min_sim),
        )
    ]
    for name, comparator, threshold in (
        ("qed", ">=", constraints.min_qed),
        ("sa", "<=", constraints.max_sa),
    ):
        try:
            value = oracle.score_batch(name, [candidate_canonical])[0]
        except OracleError:
            checks.append(
                ConstraintCheck(
                    name=name,
                    comparator=comparator,
                    threshold=threshold,
                    value=None,
                    verdict="indeterminate",
                )
            )
            continue
        checks.append(
            ConstraintCheck(
                name=name,
                comparator=comparator,
                threshold=threshold,
                value=value,
                verdict=_verdict(value, comparator, threshold),
            )
        )
    if any(check.verdict == "fail" for check in checks):
        overall = "fail"
    elif any(check.verdict == "indeterminate" for check in checks):
        overall = "indeterminate"
    else:
        overall = "pass"
    return ConstraintReport(
        candidate=candidate_canonical, checks=tuple(checks), overall=overall
    )
