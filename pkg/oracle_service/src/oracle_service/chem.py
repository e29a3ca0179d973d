"""Self-contained molecular graph model for descriptor computation.

Parses the common SMILES subset (organic atoms, aromatic lowercase forms,
bracket atoms, branches, ring closures including ``%nn``, bond symbols,
disconnected components; stereo markers are accepted and ignored) and fills
implicit hydrogens from standard valences, which the descriptor stack needs
for molecular weight, H-bond donors, and surface-area contributions.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import networkx as nx

__all__ = ["MoleculeGraph", "SmilesError", "parse_smiles"]


class SmilesError(ValueError):
    """Unparseable SMILES input."""


ORGANIC = {"B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I"}
AROMATIC_ORGANIC = {"b", "c", "n", "o", "p", "s"}
AROMATIC_BRACKET = {"b", "c", "n", "o", "p", "s", "se", "as"}

#: Default valences used to fill implicit hydrogens (smallest first).
VALENCES = {
    "B": (3,),
    "C": (4,),
    "N": (3, 5),
    "O": (2,),
    "P": (3, 5),
    "S": (2, 4, 6),
    "F": (1,),
    "Cl": (1,),
    "Br": (1,),
    "I": (1,),
}

ATOMIC_MASS = {
    "H": 1.008, "B": 10.811, "C": 12.011, "N": 14.007, "O": 15.999,
    "F": 18.998, "Na": 22.990, "Mg": 24.305, "Al": 26.982, "Si": 28.086,
    "P": 30.974, "S": 32.065, "Cl": 35.453, "K": 39.098, "Ca": 40.078,
    "Mn": 54.938, "Fe": 55.845, "Co": 58.933, "Ni": 58.693, "Cu": 63.546,
    "Zn": 65.380, "As": 74.922, "Se": 78.971, "Br": 79.904, "I": 126.904,
    "Li": 6.941, "Sn": 118.710, "Ag": 107.868, "Au": 196.967, "Pt": 195.084,
    "Hg": 200.592, "Pb": 207.200,
}

_BRACKET = re.compile(
    r"""^(?P<isotope>\d+)?
         (?P<element>[A-Z][a-z]?|[a-z]{1,2})
         (?P<stereo>@{1,2})?
         (?P<hcount>H\d*)?
         (?P<charge>\+\d+|-\d+|\++|-+)?$""",
    re.VERBOSE,
)

_BONDS = {"-": 1.0, "=": 2.0, "#": 3.0, ":": 1.5, "/": 1.0, "\\": 1.0}


@dataclass
class GraphAtom:
    element: str
    aromatic: bool = False
    charge: int = 0
    explicit_h: int | None = None  # None for organic-subset atoms
    hydrogens: int = 0  # filled after parsing


@dataclass
class MoleculeGraph:
    atoms: list[GraphAtom]
    bonds: list[tuple[int, int, float]]  # (a, b, order; aromatic = 1.5)
    graph: nx.Graph = field(default_factory=nx.Graph, repr=False)

    def __post_init__(self) -> None:
        self.graph.add_nodes_from(range(len(self.atoms)))
        for a, b, order in self.bonds:
            self.graph.add_edge(a, b, order=order)

    @property
    def heavy_atoms(self) -> int:
        return len(self.atoms)

    def degree(self, index: int) -> int:
        return self.graph.degree[index]

    def neighbors(self, index: int) -> list[tuple[int, float]]:
        return [(j, self.graph.edges[index, j]["order"]) for j in self.graph[index]]

    def bond_order_sum(self, index: int) -> float:
        return sum(order for _, order in self.neighbors(index))

    def rings(self) -> list[list[int]]:
        return nx.cycle_basis(self.graph)

    def ring_bonds(self) -> set[frozenset[int]]:
        bridges = set(map(frozenset, nx.bridges(self.graph)))
        return {
            frozenset((a, b))
            for a, b, _ in self.bonds
            if frozenset((a, b)) not in bridges
        }

    def molecular_weight(self) -> float:
        total = 0.0
        for atom in self.atoms:
            if atom.element not in ATOMIC_MASS:
                raise SmilesError(f"no atomic mass for element {atom.element!r}")
            total += ATOMIC_MASS[atom.element] + atom.hydrogens * ATOMIC_MASS["H"]
        return total


def _fill_hydrogens(mol: MoleculeGraph) -> None:
    for index, atom in enumerate(mol.atoms):
        if atom.explicit_h is not None:
            atom.hydrogens = atom.explicit_h
            continue
        orders = math.ceil(mol.bond_order_sum(index))
        valences = VALENCES.get(atom.element, ())
        if atom.aromatic:
            # Aromatic atoms never escalate to a higher valence state: a
            # substituted aromatic nitrogen carries no implicit hydrogen.
            base = valences[0] if valences else orders
            atom.hydrogens = max(0, base - orders)
            continue
        fitting = [v for v in valences if v >= orders]
        atom.hydrogens = max(0, (fitting[0] if fitting else orders) - orders)


def _parse_bracket(body: str, position: int) -> GraphAtom:
    match = _BRACKET.match(body)
    if match is None:
        raise SmilesError(f"malformed bracket atom [{body}] at {position}")
    symbol = match.group("element")
    aromatic = symbol.islower()
    if aromatic and symbol not in AROMATIC_BRACKET:
        raise SmilesError(f"unknown aromatic element {symbol!r} at {position}")
    element = symbol.capitalize() if aromatic else symbol
    hcount_text = match.group("hcount")
    if hcount_text is None:
        hydrogens = 0
    elif hcount_text == "H":
        hydrogens = 1
    else:
        hydrogens = int(hcount_text[1:])
    charge_text = match.group("charge")
    if charge_text is None:
        charge = 0
    elif charge_text[-1].isdigit():
        charge = int(charge_text)
    else:
        charge = len(charge_text) * (1 if charge_text[0] == "+" else -1)
    return GraphAtom(element, aromatic=aromatic, charge=charge, explicit_h=hydrogens)


def parse_smiles(smiles: str) -> MoleculeGraph:
    if not smiles or not smiles.strip():
        raise SmilesError("empty SMILES")
    atoms: list[GraphAtom] = []
    bonds: list[tuple[int, int, float]] = []
    bonded: set[frozenset[int]] = set()
    prev: int | None = None
    pending: float | None = None
    branches: list[int] = []
    rings: dict[int, tuple[int, float | None]] = {}

    def bond(a: int, b: int, order: float | None) -> None:
        if a == b or frozenset((a, b)) in bonded:
            raise SmilesError(f"invalid ring bond between atoms {a} and {b}")
        if order is None:
            order = 1.5 if atoms[a].aromatic and atoms[b].aromatic else 1.0
        bonded.add(frozenset((a, b)))
        bonds.append((a, b, order))

    def add_atom(atom: GraphAtom) -> None:
        nonlocal prev, pending
        atoms.append(atom)
        index = len(atoms) - 1
        if prev is not None:
            bond(prev, index, pending)
        pending = None
        prev = index

    i = 0
    while i < len(smiles):
        ch = smiles[i]
        if ch == "(":
            if prev is None:
                raise SmilesError(f"branch before any atom at {i}")
            branches.append(prev)
            i += 1
        elif ch == ")":
            if not branches:
                raise SmilesError(f"unbalanced ')' at {i}")
            prev = branches.pop()
            i += 1
        elif ch in _BONDS:
            if pending is not None or prev is None:
                raise SmilesError(f"misplaced bond symbol at {i}")
            pending = _BONDS[ch]
            i += 1
        elif ch == ".":
            if pending is not None or prev is None:
                raise SmilesError(f"misplaced '.' at {i}")
            prev = None
            i += 1
        elif ch.isdigit() or ch == "%":
            if ch == "%":
                if not smiles[i + 1 : i + 3].isdigit() or len(smiles[i + 1 : i + 3]) < 2:
                    raise SmilesError(f"bad %nn ring closure at {i}")
                number, width = int(smiles[i + 1 : i + 3]), 3
            else:
                number, width = int(ch), 1
            if prev is None:
                raise SmilesError(f"ring closure before any atom at {i}")
            if number in rings:
                other, opening = rings.pop(number)
                order = pending if pending is not None else opening
                bond(other, prev, order)
            else:
                rings[number] = (prev, pending)
            pending = None
            i += width
        elif ch == "[":
            end = smiles.find("]", i + 1)
            if end == -1:
                raise SmilesError(f"unbalanced '[' at {i}")
            add_atom(_parse_bracket(smiles[i + 1 : end], i))
            i = end + 1
        elif ch.isalpha():
            two = smiles[i : i + 2]
            if two in ORGANIC:
                add_atom(GraphAtom(two))
                i += 2
            elif ch in ORGANIC:
                add_atom(GraphAtom(ch))
                i += 1
            elif ch in AROMATIC_ORGANIC:
                add_atom(GraphAtom(ch.upper(), aromatic=True))
                i += 1
            else:
                raise SmilesError(f"unknown element {ch!r} at {i}")
        else:
            raise SmilesError(f"unexpected character {ch!r} at {i}")

    if branches:
        raise SmilesError("unbalanced '('")
    if pending is not None:
        raise SmilesError("dangling bond symbol")
    if rings:
        raise SmilesError(f"unmatched ring closures: {sorted(rings)}")
    if not atoms:
        raise SmilesError("no atoms")
    mol = MoleculeGraph(atoms, bonds)
    _fill_hydrogens(mol)
    return mol


_MASK64 = (1 << 64) - 1
_SEED = 0xA5B35705F00D5EED


def _mix(x: int) -> int:
    x &= _MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK64
    x ^= x >> 31
    return x


def _hash_values(values: list[int]) -> int:
    h = _SEED
    for value in values:
        h = _mix(h ^ _mix(value & _MASK64))
    return h


def environment_ids(mol: MoleculeGraph, radius: int = 2) -> list[list[int]]:
    """Circular environment identifiers per radius level, for fragment
    frequency lookups and bioactivity fingerprints."""
    current = [
        _hash_values(
            [
                int.from_bytes(atom.element.encode(), "big"),
                atom.charge,
                mol.degree(i),
                int(atom.aromatic),
                atom.hydrogens,
            ]
        )
        for i, atom in enumerate(mol.atoms)
    ]
    levels = [current]
    for level in range(1, radius + 1):
        previous = levels[-1]
        fresh = []
        for i in range(mol.heavy_atoms):
            neighborhood = sorted(
                (int(order * 2), previous[j]) for j, order in mol.neighbors(i)
            )
            values = [level, previous[i]]
            for order2, neighbor in neighborhood:
                values.extend((order2, neighbor))
            fresh.append(_hash_values(values))
        levels.append(fresh)
    return levels


def fingerprint_bits(mol: MoleculeGraph, radius: int = 2, nbits: int = 2048) -> list[int]:
    """Folded fingerprint as a 0/1 list (feature vector for models)."""
    bits = [0] * nbits
    mask = nbits - 1
    for level in environment_ids(mol, radius):
        for identifier in level:
            bits[identifier & mask] = 1
    return bits
