"""Shared fixtures and strategies for the test suite."""

from __future__ import annotations

import random
from contextlib import contextmanager
from pathlib import Path

import pytest
from hypothesis import strategies as st

from moldebate.chem import Atom, Bond, BondOrder, Molecule

DATA_DIR = Path(__file__).parent / "data"


def permute_atoms(mol: Molecule, rng: random.Random) -> Molecule:
    """Rebuild ``mol`` with atoms renumbered by a random permutation."""
    n = len(mol.atoms)
    perm = list(range(n))
    rng.shuffle(perm)  # perm[old] = new
    atoms: list[Atom | None] = [None] * n
    for old, new in enumerate(perm):
        atoms[new] = mol.atoms[old]
    bonds = [Bond(perm[b.a], perm[b.b], b.order) for b in mol.bonds]
    return Molecule(atoms, bonds)  # type: ignore[arg-type]


_PLAIN_ELEMENTS = ["C", "N", "O", "S", "P", "B", "F", "Cl", "Br", "I"]
_AROMATIC_ELEMENTS = ["C", "N", "O", "S"]


@st.composite
def molecules(draw: st.DrawFn, max_atoms: int = 12) -> Molecule:
    """Random connected molecular graphs honoring the aromatic-bond rule."""
    n = draw(st.integers(min_value=1, max_value=max_atoms))
    atoms = []
    for _ in range(n):
        aromatic = draw(st.booleans())
        if aromatic:
            element = draw(st.sampled_from(_AROMATIC_ELEMENTS))
            atoms.append(Atom(element, aromatic=True))
        else:
            element = draw(st.sampled_from(_PLAIN_ELEMENTS))
            charge = draw(st.sampled_from([0, 0, 0, 1, -1]))
            hcount = draw(st.sampled_from([None, None, 0, 1, 2, 3]))
            atoms.append(Atom(element, charge=charge, hcount=hcount))
    bonds = []

    def order_for(a: int, b: int) -> BondOrder:
        if atoms[a].aromatic and atoms[b].aromatic:
            return draw(st.sampled_from([BondOrder.AROMATIC, BondOrder.SINGLE]))
        return draw(
            st.sampled_from([BondOrder.SINGLE, BondOrder.SINGLE, BondOrder.DOUBLE, BondOrder.TRIPLE])
        )

    # Random spanning tree keeps the graph connected.
    for i in range(1, n):
        j = draw(st.integers(min_value=0, max_value=i - 1))
        bonds.append(Bond(j, i, order_for(j, i)))
    taken = {frozenset((b.a, b.b)) for b in bonds}
    extra = draw(st.integers(min_value=0, max_value=min(3, n)))
    for _ in range(extra):
        a = draw(st.integers(min_value=0, max_value=n - 1))
        b = draw(st.integers(min_value=0, max_value=n - 1))
        if a == b or frozenset((a, b)) in taken:
            continue
        taken.add(frozenset((a, b)))
        bonds.append(Bond(a, b, order_for(a, b)))
    return Molecule(atoms, bonds)


@contextmanager
def acceptance(name: str):
    """Print one pass/fail line per acceptance criterion."""
    try:
        yield
    except BaseException:
        print(f"[ACCEPTANCE] {name}: FAIL", flush=True)
        raise
    print(f"[ACCEPTANCE] {name}: PASS", flush=True)


@pytest.fixture
def seeded_rng() -> random.Random:
    return random.Random(0xC0FFEE)
