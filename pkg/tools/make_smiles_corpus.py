#!/usr/bin/env python3
"""Build the bundled SMILES corpus used by the acceptance suite.

Lines starting with ``!`` are pre-marked invalid (the ``!`` is a marker,
not part of the string); everything else must parse.  The corpus mixes
hand-curated drug-like molecules, seeded random molecular graphs written
out by a naive (non-canonical) emitter, and grammar-feature exercisers.
"""

from __future__ import annotations

import random
import warnings
from collections import defaultdict
from pathlib import Path

from moldebate.chem import Atom, Bond, BondOrder, Molecule, parse
from moldebate.chem.canon import _atom_token, _bond_symbol

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "smiles_corpus.txt"

DRUGLIKE = [
    "CC(=O)Oc1ccccc1C(=O)O",
    "Cn1cnc2c1c(=O)n(C)c(=O)n2C",
    "CC(C)Cc1ccc(cc1)C(C)C(=O)O",
    "CC(=O)Nc1ccc(O)cc1",
    "Clc1ccccc1C(=O)NCCN",
    "c1ccc2c(c1)cccc2",
    "c1ccc2c(c1)[nH]c1ccccc12",
    "CCN(CC)CCNC(=O)c1ccc(N)cc1",
    "COc1ccc2cc(ccc2c1)C(C)C(=O)O",
    "NC(=O)c1ccc(cc1)S(=O)(=O)N",
    "OC(=O)c1cc(O)c(O)c(O)c1",
    "Nc1ncnc2c1ncn2C1CCCO1",
    "CN1CCC(CC1)Oc1ccccc1",
    "OCC(O)C(O)C(O)C(O)CO",
    "Fc1ccc(cc1)C(=O)c1ccc(F)cc1",
    "CC(C)(C)NCC(O)c1ccc(O)c(CO)c1",
    "O=C1CCCCC1",
    "O=C1NC(=O)c2ccccc12",
    "CC1CCC(CC1)C(C)(C)O",
    "c1ccsc1",
    "c1ccoc1",
    "c1cc[nH]c1",
    "c1ccncc1",
    "c1ccc(cc1)c1ccccc1",
    "N#Cc1ccccc1",
    "CCOC(=O)c1ccccc1N",
    "CC(=O)OCC(=O)O",
    "OC(=O)CC(O)(CC(=O)O)C(=O)O",
    "NCCc1cc(O)c(O)cc1",
    "CNCC(O)c1cc(O)c(O)cc1",
    "CC(N)Cc1ccccc1",
    "COc1cc2c(cc1OC)CCN(C)C2",
    "CCCCCCCCCCCCCCCC(=O)O",
    "C1CCNC1",
    "C1COCCN1",
    "C1CNCCN1",
    "O=S(=O)(N)c1ccc(Cl)cc1",
    "CC(C)NCC(O)COc1ccccc1",
    "Brc1ccc(cc1)C(=O)NC1CC1",
    "O=C(Nc1ccccc1)c1ccccc1",
    "CC(=O)N1CCN(CC1)c1ccccc1",
    "CC(C)(C)OC(=O)NC(C)C(=O)O",
    "Ic1ccc(cc1)C(=O)O",
    "OCc1ccc(cc1)[N+](=O)[O-]",
    "CSc1ccccc1",
    "CC(=O)SC",
    "OC(=O)C=Cc1ccccc1",
    "CCOP(=O)(OCC)OCC",
    "NC(=O)NC(=O)c1ccccc1",
    "O=C(OCC)c1ccc(N)cc1",
]

FEATURE_CASES = [
    "C%10CCCCC%10",
    "C%11CCC%11",
    "C1CC2CCC1CC2",
    "C12CC3CC(C1)CC(C2)C3",
    "[NH4+]",
    "[O-]c1ccccc1",
    "[Na+].[Cl-]",
    "[K+].[I-]",
    "CC.OCC",
    "CC(=O)[O-].[Na+]",
    "[13CH4]",
    "[2H]OC",
    "[CH3-]",
    "[C]",
    "[CH4]",
    "[nH]1cccc1",
    "[se]1cccc1",
    "B1OB(O1)O",
    "C[C@H](N)C(=O)O",
    "C[C@@H](N)C(=O)O",
    "OC(=O)/C=C/C(=O)O",
    "OC(=O)\\C=C\\C(=O)O",
    "F/C=C/F",
    "N[C@@H](Cc1ccccc1)C(=O)O",
    "C(/F)(\\Cl)=C",
    "c1ccc2c(c1)ccc1ccccc12",
    "O=C=O",
    "C#C",
    "CC#CC",
    "[Fe+2].[O-]C(=O)C",
    "[Mg+2].[O-]C(=O)C.[O-]C(=O)C",
]

INVALID_CASES = [
    "C(",
    "C)",
    "C((C)",
    "[CH3",
    "CH3]",
    "C1CCC",
    "C%1CC",
    "CC==O",
    "=CC",
    "C=",
    "C..C",
    "C.=C",
    "Xx",
    "[Xx]",
    "[zz]",
    "c1ccccc1:C",
    "1CC",
    "C11",
    "C!!C",
    "[C@@]extra]",
    "%12CC",
    "C#",
    "([H])C",
    "",
    "   ",
]

PLAIN = ["C", "N", "O", "S", "P", "B", "F", "Cl", "Br", "I"]
AROM = ["C", "N", "O", "S"]


def random_molecule(rng: random.Random) -> Molecule:
    n = rng.randint(2, 18)
    atoms = []
    for _ in range(n):
        if rng.random() < 0.35:
            atoms.append(Atom(rng.choice(AROM), aromatic=True))
        else:
            element = rng.choice(PLAIN)
            charge = rng.choice([0] * 12 + [1, -1])
            hcount = rng.choice([None] * 10 + [0, 1, 2, 3])
            atoms.append(Atom(element, charge=charge, hcount=hcount))

    def order_for(a: int, b: int) -> BondOrder:
        if atoms[a].aromatic and atoms[b].aromatic:
            return rng.choice([BondOrder.AROMATIC] * 3 + [BondOrder.SINGLE])
        return rng.choice(
            [BondOrder.SINGLE] * 6 + [BondOrder.DOUBLE] * 2 + [BondOrder.TRIPLE]
        )

    bonds = []
    for i in range(1, n):
        j = rng.randrange(i)
        bonds.append(Bond(j, i, order_for(j, i)))
    taken = {frozenset((b.a, b.b)) for b in bonds}
    for _ in range(rng.randint(0, 3)):
        a, b = rng.randrange(n), rng.randrange(n)
        if a == b or frozenset((a, b)) in taken:
            continue
        taken.add(frozenset((a, b)))
        bonds.append(Bond(a, b, order_for(a, b)))
    return Molecule(atoms, bonds)


def naive_smiles(mol: Molecule, rng: random.Random) -> str:
    """Independent non-canonical writer: random start, random branches."""
    start = rng.randrange(len(mol.atoms))
    visited: set[int] = set()
    parent: dict[int, int] = {}
    children: dict[int, list] = defaultdict(list)
    ring_at: dict[int, list] = defaultdict(list)
    seen_pairs: set[frozenset] = set()

    def dfs(u: int) -> None:
        visited.add(u)
        neighbors = list(mol.neighbors(u))
        rng.shuffle(neighbors)
        for v, order in neighbors:
            if v not in visited:
                parent[v] = u
                children[u].append((v, order))
                dfs(v)
            elif parent.get(u) != v:
                pair = frozenset((u, v))
                if pair not in seen_pairs:
                    seen_pairs.add(pair)
                    ring_at[u].append((v, order))
                    ring_at[v].append((u, order))

    dfs(start)
    open_markers: dict[frozenset, int] = {}
    in_use: set[int] = set()

    def marker_text(marker: int) -> str:
        return str(marker) if marker < 10 else f"%{marker:02d}"

    def emit(u: int) -> str:
        text = _atom_token(mol.atoms[u])
        for v, order in ring_at[u]:
            pair = frozenset((u, v))
            if pair in open_markers:
                marker = open_markers.pop(pair)
                in_use.discard(marker)
                text += marker_text(marker)
            else:
                marker = 1
                while marker in in_use:
                    marker += 1
                in_use.add(marker)
                open_markers[pair] = marker
                text += _bond_symbol(order, mol.atoms[u], mol.atoms[v]) + marker_text(marker)
        kids = children[u]
        for v, order in kids[:-1]:
            text += "(" + _bond_symbol(order, mol.atoms[u], mol.atoms[v]) + emit(v) + ")"
        if kids:
            v, order = kids[-1]
            text += _bond_symbol(order, mol.atoms[u], mol.atoms[v]) + emit(v)
        return text

    return emit(start)


def main() -> None:
    rng = random.Random(20240831)
    lines: list[str] = []
    seen: set[str] = set()

    def add_valid(smiles: str) -> bool:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            mol = parse(smiles)  # must parse
            canonical = mol.canonical
            if canonical in seen and smiles in lines:
                return False
            assert parse(canonical).canonical == canonical
        seen.add(canonical)
        lines.append(smiles)
        return True

    for smiles in DRUGLIKE + FEATURE_CASES:
        add_valid(smiles)

    while len(lines) < 1030:
        mol = random_molecule(rng)
        text = naive_smiles(mol, rng)
        if len(text) > 120:
            continue
        add_valid(text)

    invalid = [f"!{case}" for case in INVALID_CASES]
    # Interleave the invalid markers at deterministic positions.
    for i, marker in enumerate(invalid):
        lines.insert((i + 1) * 40, marker)

    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text("\n".join(lines) + "\n", encoding="utf-8")
    valid_count = sum(1 for line in lines if not line.startswith("!"))
    print(f"wrote {OUT}: {valid_count} valid + {len(invalid)} invalid lines")


if __name__ == "__main__":
    main()
