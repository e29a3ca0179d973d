"""Cheminformatics core: SMILES parsing, canonical form, fingerprints."""

from .canon import canonicalize
from .fingerprint import (
    Fingerprint,
    environment_identifiers,
    morgan_fingerprint,
    tanimoto,
)
from .mol import Atom, Bond, BondOrder, Molecule
from .parser import StereoDiscardedWarning, parse

__all__ = [
    "Atom",
    "Bond",
    "BondOrder",
    "Molecule",
    "Fingerprint",
    "StereoDiscardedWarning",
    "canonicalize",
    "environment_identifiers",
    "morgan_fingerprint",
    "parse",
    "tanimoto",
]
