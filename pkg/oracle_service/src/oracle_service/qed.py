"""Drug-likeness estimate in [0, 1].

Follows the published QED structure: eight descriptor desirabilities
combined by a geometric mean.  When rdkit is importable the service uses
its reference implementation instead (see scorers); this module is the
self-contained fallback, with smooth unimodal desirability curves centered
on textbook drug-like optima rather than the reference curve parameters,
and is versioned separately so callers can tell the two apart.
"""

from __future__ import annotations

import math

from .chem import MoleculeGraph
from .descriptors import compute_descriptors

__all__ = ["qed_score", "SURROGATE_QED_VERSION"]

SURROGATE_QED_VERSION = "surrogate-qed/1"


def _bell(value: float, center: float, width: float) -> float:
    """Smooth unimodal desirability in (0, 1], 1 at the center."""
    return 1.0 / (1.0 + ((value - center) / width) ** 2)


def qed_score(mol: MoleculeGraph) -> float:
    d = compute_descriptors(mol)
    desirabilities = [
        _bell(d.molecular_weight, 300.0, 160.0),
        _bell(d.logp, 2.5, 2.5),
        _bell(d.hba, 3.0, 4.0),
        _bell(d.hbd, 1.0, 2.5),
        _bell(d.tpsa, 75.0, 70.0),
        _bell(d.rotatable_bonds, 4.0, 5.0),
        _bell(d.aromatic_rings, 2.0, 2.0),
        1.0 / (1.0 + d.alerts),
    ]
    log_sum = sum(math.log(value) for value in desirabilities)
    return math.exp(log_sum / len(desirabilities))
