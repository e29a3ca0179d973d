"""Molecular graph model.

A :class:`Molecule` is a plain labeled graph: atoms carry (element, formal
charge, aromatic flag, explicit hydrogen count), bonds carry an order.  There
is deliberately no chemistry model on top of the graph: no valence checking,
no aromaticity perception, no kekulization.  Two SMILES spellings are the
same molecule exactly when they describe the same labeled graph.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence


class BondOrder(enum.IntEnum):
    """Bond order; integer values double as the deterministic sort rank."""

    SINGLE = 1
    DOUBLE = 2
    TRIPLE = 3
    AROMATIC = 4


#: Elements that may carry the aromatic flag.
AROMATIC_ELEMENTS = frozenset({"B", "C", "N", "O", "P", "S", "Se", "As"})


@dataclass(frozen=True)
class Atom:
    """One atom.

    ``hcount`` is the explicit hydrogen count: an integer for bracket atoms
    (``[CH3]`` -> 3, ``[C]`` -> 0) and ``None`` for organic-subset atoms,
    where SMILES leaves it unspecified.  ``isotope`` is parsed but excluded
    from canonical form and fingerprints.
    """

    element: str
    charge: int = 0
    aromatic: bool = False
    hcount: Optional[int] = None
    isotope: Optional[int] = None


@dataclass(frozen=True)
class Bond:
    a: int
    b: int
    order: BondOrder = BondOrder.SINGLE


class Molecule:
    """Immutable molecular graph with a cached canonical SMILES form.

    Construction validates the graph invariants: bond endpoints are valid
    and distinct, no unordered atom pair is bonded twice, and aromatic bonds
    join two aromatic-flagged atoms.
    """

    def __init__(self, atoms: Iterable[Atom], bonds: Iterable[Bond] = ()):
        self.atoms: tuple[Atom, ...] = tuple(atoms)
        self.bonds: tuple[Bond, ...] = tuple(bonds)
        n = len(self.atoms)
        if n == 0:
            raise ValueError("a molecule needs at least one atom")
        for atom in self.atoms:
            if atom.aromatic and atom.element not in AROMATIC_ELEMENTS:
                raise ValueError(f"element {atom.element!r} cannot be aromatic")
            if atom.hcount is not None and atom.hcount < 0:
                raise ValueError("explicit hydrogen count must be non-negative")
        seen: set[frozenset[int]] = set()
        adjacency: list[list[tuple[int, BondOrder]]] = [[] for _ in range(n)]
        for bond in self.bonds:
            if not (0 <= bond.a < n and 0 <= bond.b < n):
                raise ValueError(f"bond endpoint out of range: {bond}")
            if bond.a == bond.b:
                raise ValueError(f"bond connects atom {bond.a} to itself")
            pair = frozenset((bond.a, bond.b))
            if pair in seen:
                raise ValueError(f"duplicate bond between atoms {bond.a} and {bond.b}")
            seen.add(pair)
            if bond.order is BondOrder.AROMATIC:
                if not (self.atoms[bond.a].aromatic and self.atoms[bond.b].aromatic):
                    raise ValueError(
                        f"aromatic bond between non-aromatic atoms {bond.a} and {bond.b}"
                    )
            adjacency[bond.a].append((bond.b, bond.order))
            adjacency[bond.b].append((bond.a, bond.order))
        self._adjacency: tuple[tuple[tuple[int, BondOrder], ...], ...] = tuple(
            tuple(neighbors) for neighbors in adjacency
        )

    def neighbors(self, index: int) -> Sequence[tuple[int, BondOrder]]:
        """(neighbor index, bond order) pairs of the atom at ``index``."""
        return self._adjacency[index]

    def degree(self, index: int) -> int:
        return len(self._adjacency[index])

    def __len__(self) -> int:
        return len(self.atoms)

    @cached_property
    def canonical(self) -> str:
        """Canonical SMILES; computed once and cached."""
        from .canon import canonical_smiles

        return canonical_smiles(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Molecule):
            return NotImplemented
        return self.canonical == other.canonical

    def __hash__(self) -> int:
        return hash(self.canonical)

    def __repr__(self) -> str:
        return f"Molecule({self.canonical!r})"
