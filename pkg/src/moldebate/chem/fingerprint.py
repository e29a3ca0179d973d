"""Circular (ECFP-style) fingerprints and Tanimoto similarity.

Environment identifiers are 64-bit hashes built with a fixed splitmix64
mixer (seed ``0x9E3779B97F4A7C15``), so fingerprints are bit-identical
across runs, platforms, and processes.  The radius-0 identifier of an atom
hashes (element, charge, degree, aromatic flag, explicit-H count, -1 when
unspecified); each further round hashes the previous identifier together
with the (bond order, neighbor identifier) pairs sorted by that key.  Every
identifier from every round is folded into the bit vector modulo its width.
"""

from __future__ import annotations

from dataclasses import dataclass

from .mol import Molecule

__all__ = ["Fingerprint", "morgan_fingerprint", "tanimoto", "environment_identifiers"]

_MASK64 = (1 << 64) - 1
_SEED = 0x9E3779B97F4A7C15


def _mix64(x: int) -> int:
    """splitmix64 finalizer."""
    x &= _MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK64
    x ^= x >> 31
    return x


def _hash_sequence(values: list[int]) -> int:
    h = _SEED
    for value in values:
        h = _mix64(h ^ _mix64(value & _MASK64))
    return h


@dataclass(frozen=True)
class Fingerprint:
    """Fixed-width bit vector; ``bits`` is the vector as a big integer."""

    bits: int
    nbits: int
    radius: int
    popcount: int = -1

    def __post_init__(self) -> None:
        if self.nbits < 64 or self.nbits & (self.nbits - 1):
            raise ValueError("fingerprint width must be a power of two >= 64")
        if self.bits < 0 or self.bits >> self.nbits:
            raise ValueError("bit vector wider than the declared width")
        object.__setattr__(self, "popcount", self.bits.bit_count())

    def on_bits(self) -> list[int]:
        return [i for i in range(self.nbits) if self.bits >> i & 1]


def environment_identifiers(mol: Molecule, radius: int = 2) -> list[list[int]]:
    """Per-round atom environment identifiers; ``result[r][i]`` covers the
    neighborhood of atom ``i`` up to ``r`` bonds."""
    if radius < 0:
        raise ValueError("radius must be non-negative")
    current = []
    for i, atom in enumerate(mol.atoms):
        hcount = -1 if atom.hcount is None else atom.hcount
        current.append(
            _hash_sequence(
                [
                    int.from_bytes(atom.element.encode("ascii"), "big"),
                    atom.charge,
                    mol.degree(i),
                    int(atom.aromatic),
                    hcount,
                ]
            )
        )
    levels = [current]
    for level in range(1, radius + 1):
        previous = levels[-1]
        fresh = []
        for i in range(len(mol)):
            neighborhood = sorted(
                (int(order), previous[j]) for j, order in mol.neighbors(i)
            )
            values = [level, previous[i]]
            for order_rank, neighbor_id in neighborhood:
                values.append(order_rank)
                values.append(neighbor_id)
            fresh.append(_hash_sequence(values))
        levels.append(fresh)
    return levels


def morgan_fingerprint(mol: Molecule, radius: int = 2, nbits: int = 2048) -> Fingerprint:
    """Fold every environment identifier of every round into a bit vector."""
    if nbits < 64 or nbits & (nbits - 1):
        raise ValueError("nbits must be a power of two >= 64")
    mask = nbits - 1
    bits = 0
    for level in environment_identifiers(mol, radius):
        for identifier in level:
            bits |= 1 << (identifier & mask)
    return Fingerprint(bits=bits, nbits=nbits, radius=radius)


def tanimoto(a: Fingerprint, b: Fingerprint) -> float:
    """|a AND b| / |a OR b|; 1.0 when both vectors are all-zero."""
    if a.nbits != b.nbits:
        raise ValueError(f"fingerprint width mismatch: {a.nbits} != {b.nbits}")
    union = (a.bits | b.bits).bit_count()
    if union == 0:
        return 1.0
    return (a.bits & b.bits).bit_count() / union
