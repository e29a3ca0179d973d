"""Bioactivity oracles backed by scikit-learn model artifacts.

Models are binary classifiers over folded circular fingerprints (radius 2,
2048 bits); the score is the positive-class probability.  Artifacts load
once at startup; a property with no artifact (or without scikit-learn
installed) stays disabled and /health reflects it.
"""

from __future__ import annotations

from pathlib import Path

from .chem import MoleculeGraph, fingerprint_bits

__all__ = ["BioactivityModel", "load_model"]

FP_RADIUS = 2
FP_BITS = 2048


class BioactivityModel:
    def __init__(self, name: str, model, version: str):
        self.name = name
        self._model = model
        self.version = version

    def score(self, mol: MoleculeGraph) -> float:
        features = [fingerprint_bits(mol, FP_RADIUS, FP_BITS)]
        if hasattr(self._model, "predict_proba"):
            return float(self._model.predict_proba(features)[0][1])
        return float(self._model.predict(features)[0])


def load_model(name: str, path: str | Path) -> BioactivityModel:
    """Load a joblib artifact; raises on any failure (startup is fail-fast)."""
    import joblib  # local import: scikit-learn stack is optional

    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"model artifact for {name!r} not found: {path}")
    model = joblib.load(path)
    version = f"sklearn-artifact/{path.name}"
    return BioactivityModel(name, model, version)
