"""Scorer registry.

QED and SA prefer the reference cheminformatics toolkit (rdkit) when it is
importable, since those scores are standardized; otherwise the bundled
self-contained implementations serve, under distinct version strings so
/health always tells callers which parameterization answered.  Bioactivity
properties (gsk3b, drd2, jnk3) load from configured model artifacts and are
disabled when absent.
"""

from __future__ import annotations

import warnings
from typing import Callable

from .chem import MoleculeGraph, parse_smiles
from .config import ServiceConfig

__all__ = ["Scorer", "build_scorers"]


class Scorer:
    def __init__(self, name: str, version: str, fn: Callable[[MoleculeGraph | str], float]):
        self.name = name
        self.version = version
        self._fn = fn

    def score(self, smiles: str) -> float:
        return float(self._fn(smiles))


def _rdkit_scorers() -> dict[str, Scorer] | None:
    try:
        from rdkit import Chem, RDLogger
        from rdkit.Chem import QED as RDQED
    except ImportError:
        return None
    RDLogger.DisableLog("rdApp.*")

    def to_mol(smiles: str):
        mol = Chem.MolFromSmiles(smiles)
        if mol is None:
            raise ValueError(f"rdkit could not parse {smiles!r}")
        return mol

    scorers = {
        "qed": Scorer("qed", "rdkit-qed", lambda s: RDQED.qed(to_mol(s)))
    }
    try:
        import os
        import sys

        from rdkit.Chem import RDConfig

        sys.path.append(os.path.join(RDConfig.RDContribDir, "SA_Score"))
        import sascorer  # type: ignore

        scorers["sa"] = Scorer(
            "sa", "rdkit-sascorer", lambda s: sascorer.calculateScore(to_mol(s))
        )
    except Exception:
        pass
    return scorers


def _surrogate_scorers() -> dict[str, Scorer]:
    from .qed import SURROGATE_QED_VERSION, qed_score
    from .sa import SURROGATE_SA_VERSION, sa_score

    return {
        "qed": Scorer("qed", SURROGATE_QED_VERSION, lambda s: qed_score(parse_smiles(s))),
        "sa": Scorer("sa", SURROGATE_SA_VERSION, lambda s: sa_score(parse_smiles(s))),
    }


def build_scorers(config: ServiceConfig) -> dict[str, Scorer]:
    """Resolve every enabled property to a loadable scorer, fail-fast."""
    available = _surrogate_scorers()
    reference = _rdkit_scorers()
    if reference:
        available.update(reference)

    for name, path in config.model_paths.items():
        from .bioactivity import load_model  # fail-fast import if configured

        model = load_model(name, path)
        available[name] = Scorer(
            name, model.version, lambda s, m=model: m.score(parse_smiles(s))
        )

    scorers = {}
    for name in config.properties:
        if name not in available:
            raise RuntimeError(
                f"property {name!r} is enabled but no scorer is loadable "
                "(bioactivity oracles need a model artifact path)"
            )
        scorers[name] = available[name]
    missing = [n for n in config.properties if n not in scorers]
    if missing:
        raise RuntimeError(f"unresolved properties: {missing}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for scorer in scorers.values():
            scorer.score("CCO")  # startup self-check
    return scorers
