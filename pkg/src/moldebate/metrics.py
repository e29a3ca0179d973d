"""Evaluation metrics for generated molecule sets.

* internal diversity: one minus the mean pairwise Tanimoto similarity;
* #circles: greedy sphere-exclusion count at a similarity threshold;
* top-k AUC: budget-normalized area under the running mean of the best k
  oracle scores versus oracle-call count;
* the log10(IC50) -> kcal/mol conversion.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Sequence

from .chem import Fingerprint, Molecule, morgan_fingerprint, tanimoto
from .errors import MetricError

__all__ = [
    "MetricConfig",
    "ScoredCall",
    "int_div",
    "int_div_fingerprints",
    "mean_pairwise_similarity",
    "mean_similarity_fingerprints",
    "num_circles",
    "num_circles_fingerprints",
    "topk_auc",
    "affinity_to_kcal",
    "KCAL_PER_LOG10_IC50",
]

#: RT*ln(10) in kcal/mol with R = 1.98720e-3 kcal/(mol*K) at T = 298 K.
KCAL_PER_LOG10_IC50 = 1.98720e-3 * 298.0 * math.log(10.0)


@dataclass(frozen=True)
class MetricConfig:
    """Knobs shared by campaign scoring and the ``score`` CLI subcommand."""

    circle_threshold: float = 0.75
    auc_k: int = 10
    oracle_budget: int = 1000
    fp_radius: int = 2
    fp_nbits: int = 2048

    def __post_init__(self) -> None:
        if not 0.0 < self.circle_threshold <= 1.0:
            raise ValueError("circle_threshold must be in (0, 1]")
        if self.auc_k < 1:
            raise ValueError("auc_k must be positive")
        if self.oracle_budget < 1:
            raise ValueError("oracle_budget must be positive")


@dataclass(frozen=True)
class ScoredCall:
    """One oracle call: 1-based call index, canonical SMILES, score."""

    call_index: int
    molecule: str
    score: float


def _fingerprints(
    mols: Sequence[Molecule], radius: int, nbits: int
) -> list[Fingerprint]:
    return [morgan_fingerprint(mol, radius=radius, nbits=nbits) for mol in mols]


def mean_similarity_fingerprints(fps: Sequence[Fingerprint]) -> float:
    """Mean Tanimoto over all unordered distinct fingerprint pairs."""
    if len(fps) < 2:
        raise MetricError("pairwise similarity needs at least 2 molecules")
    # fsum is exactly rounded, so the mean is independent of input order.
    total = math.fsum(
        tanimoto(fps[i], fps[j])
        for i in range(len(fps))
        for j in range(i + 1, len(fps))
    )
    return total / (len(fps) * (len(fps) - 1) // 2)


def int_div_fingerprints(fps: Sequence[Fingerprint]) -> float:
    return 1.0 - mean_similarity_fingerprints(fps)


def num_circles_fingerprints(fps: Sequence[Fingerprint], h: float = 0.75) -> int:
    if not 0.0 < h <= 1.0:
        raise ValueError("h must be in (0, 1]")
    centers: list[Fingerprint] = []
    for fp in fps:
        if all(tanimoto(fp, center) < h for center in centers):
            centers.append(fp)
    return len(centers)


def mean_pairwise_similarity(
    mols: Sequence[Molecule], radius: int = 2, nbits: int = 2048
) -> float:
    """Mean Tanimoto over all unordered distinct pairs."""
    if len(mols) < 2:
        raise MetricError("pairwise similarity needs at least 2 molecules")
    return mean_similarity_fingerprints(_fingerprints(mols, radius, nbits))


def int_div(mols: Sequence[Molecule], radius: int = 2, nbits: int = 2048) -> float:
    """Internal diversity: 1 - mean pairwise Tanimoto (higher = more diverse)."""
    return 1.0 - mean_pairwise_similarity(mols, radius=radius, nbits=nbits)


def num_circles(
    mols: Sequence[Molecule],
    h: float = 0.75,
    radius: int = 2,
    nbits: int = 2048,
) -> int:
    """Greedy sphere exclusion in input order.

    A molecule opens a new circle iff its similarity to every existing
    circle center is strictly below ``h``.  Callers control the packing
    order through the input order (e.g. sort by score first).
    """
    return num_circles_fingerprints(_fingerprints(mols, radius, nbits), h=h)


def topk_auc(calls: Sequence[ScoredCall], k: int = 10, budget: int = 1000) -> float:
    """Area under the running mean of the best ``k`` scores, per call.

    After call ``i`` the running value is the mean of the top ``min(k, i)``
    scores so far.  Runs shorter than ``budget`` are extended with the final
    running value so AUCs stay comparable across run lengths.  Duplicate
    molecules count: they consumed oracle budget.
    """
    if not calls:
        raise MetricError("top-k AUC is undefined for an empty call list")
    if k < 1:
        raise ValueError("k must be positive")
    if len(calls) > budget:
        raise ValueError(f"{len(calls)} calls exceed the budget of {budget}")
    previous_index = 0
    heap: list[float] = []
    total = 0.0
    running = 0.0
    for call in calls:
        if call.call_index <= previous_index:
            raise ValueError("call indices must be strictly increasing")
        previous_index = call.call_index
        if not math.isfinite(call.score):
            raise ValueError(f"non-finite score for {call.molecule!r}")
        if len(heap) < k:
            heapq.heappush(heap, call.score)
        elif call.score > heap[0]:
            heapq.heapreplace(heap, call.score)
        running = sum(heap) / len(heap)
        total += running
    total += running * (budget - len(calls))
    return total / budget


def affinity_to_kcal(log10_ic50: float) -> float:
    """Convert a log10(IC50 in molar) affinity to kcal/mol (RT*ln10 slope)."""
    if not math.isfinite(log10_ic50):
        raise ValueError("log10(IC50) must be finite")
    return KCAL_PER_LOG10_IC50 * log10_ic50
