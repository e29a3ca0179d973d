"""Synthetic accessibility estimate in [1, 10] (lower = easier).

Follows the published fragment-plus-complexity structure: a fragment
commonness term (how familiar the molecule's circular environments are,
looked up in a bundled frequency table) corrected by size, ring,
macrocycle, stereo-free branching, and charge penalties, then rescaled to
1..10.  When rdkit plus its contributed scorer are importable the service
delegates to the reference implementation instead; this module is the
versioned self-contained fallback.
"""

from __future__ import annotations

import json
import math
from functools import lru_cache
from importlib import resources

from .chem import MoleculeGraph, environment_ids
from .descriptors import compute_descriptors

__all__ = ["sa_score", "SURROGATE_SA_VERSION"]

SURROGATE_SA_VERSION = "surrogate-sa/1"

_FRAGMENT_RADIUS = 2


@lru_cache(maxsize=1)
def _fragment_table() -> dict[int, float]:
    """Bundled log10 frequency per radius-2 environment id."""
    raw = json.loads(
        resources.files("oracle_service")
        .joinpath("data", "fragment_scores.json")
        .read_text(encoding="utf-8")
    )
    return {int(key): float(value) for key, value in raw["scores"].items()}


def _fragment_commonness(mol: MoleculeGraph) -> float:
    """Mean familiarity of the molecule's outermost environments.

    Environments absent from the table contribute the unseen penalty, so
    exotic substructures push the score toward "hard".
    """
    table = _fragment_table()
    identifiers = environment_ids(mol, _FRAGMENT_RADIUS)[_FRAGMENT_RADIUS]
    total = sum(table.get(identifier, -1.0) for identifier in identifiers)
    return total / len(identifiers)


def sa_score(mol: MoleculeGraph) -> float:
    d = compute_descriptors(mol)
    commonness = _fragment_commonness(mol)  # roughly in [-1, 2.5]

    size_penalty = d.heavy_atoms ** 1.005 - d.heavy_atoms
    ring_penalty = 0.25 * d.rings
    macro_penalty = math.log10(d.max_ring_size - 7) + 0.5 if d.max_ring_size > 8 else 0.0
    branch_penalty = 0.03 * sum(
        1 for i in range(mol.heavy_atoms) if mol.degree(i) >= 4
    )
    charge_penalty = 0.2 * d.charged_atoms

    raw = (
        3.0
        - 1.6 * commonness
        + size_penalty
        + ring_penalty
        + macro_penalty
        + branch_penalty
        + charge_penalty
    )
    return min(10.0, max(1.0, raw))
