from __future__ import annotations

import pytest

from moldebate.chem import Atom, Bond, BondOrder, Molecule, parse
from moldebate.chem.parser import StereoDiscardedWarning
from moldebate.errors import ParseError


def test_single_atom():
    mol = parse("C")
    assert len(mol.atoms) == 1
    assert mol.atoms[0] == Atom("C")
    assert not mol.atoms[0].aromatic
    assert mol.bonds == ()


def test_benzene_ring_closure():
    mol = parse("c1ccccc1")
    assert len(mol.atoms) == 6
    assert all(a.aromatic and a.element == "C" for a in mol.atoms)
    assert len(mol.bonds) == 6
    assert all(b.order is BondOrder.AROMATIC for b in mol.bonds)


def test_unbalanced_branch_offset():
    with pytest.raises(ParseError) as excinfo:
        parse("C(")
    assert excinfo.value.offset == 1


def test_acetic_acid_graph():
    # CC(=O)O: 4 atoms, C-C, C=O, C-O.
    mol = parse("CC(=O)O")
    assert len(mol.atoms) == 4
    assert len(mol.bonds) == 3
    orders = sorted(b.order for b in mol.bonds)
    assert orders == [BondOrder.SINGLE, BondOrder.SINGLE, BondOrder.DOUBLE]


def test_two_letter_halogens():
    mol = parse("ClCBr")
    assert [a.element for a in mol.atoms] == ["Cl", "C", "Br"]


def test_bracket_atom_fields():
    mol = parse("[13CH3-]")
    atom = mol.atoms[0]
    assert atom.element == "C"
    assert atom.isotope == 13
    assert atom.hcount == 3
    assert atom.charge == -1
    assert not atom.aromatic


@pytest.mark.parametrize(
    "smiles,charge",
    [("[NH4+]", 1), ("[O-]", -1), ("[Fe+2]", 2), ("[Fe++]", 2), ("[O-2]", -2)],
)
def test_bracket_charges(smiles, charge):
    assert parse(smiles).atoms[0].charge == charge


def test_bracket_without_h_means_zero():
    assert parse("[C]").atoms[0].hcount == 0
    assert parse("C").atoms[0].hcount is None


def test_percent_ring_closure():
    mol = parse("C%12CCCCC%12")
    assert len(mol.bonds) == 6


def test_ring_bond_order_on_either_side():
    for smiles in ("C=1CCCCC1", "C1CCCCC=1", "C=1CCCCC=1"):
        mol = parse(smiles)
        assert sum(1 for b in mol.bonds if b.order is BondOrder.DOUBLE) == 1


def test_conflicting_ring_bond_orders():
    with pytest.raises(ParseError):
        parse("C=1CCCCC#1")


def test_dot_disconnects():
    mol = parse("[Na+].[Cl-]")
    assert len(mol.atoms) == 2
    assert mol.bonds == ()


def test_default_bond_between_aromatics_is_aromatic():
    mol = parse("cc")
    assert mol.bonds[0].order is BondOrder.AROMATIC


def test_explicit_single_between_aromatics_stays_single():
    mol = parse("c1ccccc1-c1ccccc1")
    single = [b for b in mol.bonds if b.order is BondOrder.SINGLE]
    assert len(single) == 1


def test_aromatic_bond_between_plain_atoms_rejected():
    with pytest.raises(ParseError):
        parse("C:C")


def test_stereo_markers_discarded_with_warning():
    with pytest.warns(StereoDiscardedWarning):
        mol = parse("C[C@H](N)C(=O)O")
    assert all(a.element in {"C", "N", "O"} for a in mol.atoms)
    with pytest.warns(StereoDiscardedWarning):
        mol = parse("OC(=O)/C=C/C(=O)O")
    assert sum(1 for b in mol.bonds if b.order is BondOrder.DOUBLE) == 3


@pytest.mark.parametrize(
    "smiles,offset",
    [
        ("", 0),
        ("C)", 1),
        ("C((C)C", 1),
        ("[CH3", 0),
        ("C1CC", 1),
        ("CC==O", 3),
        ("=CC", 0),
        ("C.=C", 2),
        ("C%1", 1),
        ("1CC", 0),
        ("C!C", 1),
    ],
)
def test_syntax_errors_carry_offsets(smiles, offset):
    with pytest.raises(ParseError) as excinfo:
        parse(smiles)
    assert excinfo.value.offset == offset


def test_unknown_elements_rejected():
    with pytest.raises(ParseError):
        parse("Xx")
    with pytest.raises(ParseError):
        parse("[Xx]")
    with pytest.raises(ParseError):
        parse("[zz]")


def test_self_ring_bond_rejected():
    with pytest.raises(ParseError):
        parse("C11")


def test_duplicate_ring_bond_rejected():
    with pytest.raises(ParseError):
        parse("C12CC12C")


def test_molecule_invariants_enforced():
    with pytest.raises(ValueError):
        Molecule([Atom("C")], [Bond(0, 0)])
    with pytest.raises(ValueError):
        Molecule([Atom("C"), Atom("C")], [Bond(0, 1), Bond(1, 0)])
    with pytest.raises(ValueError):
        Molecule([Atom("C"), Atom("C")], [Bond(0, 1, BondOrder.AROMATIC)])
    with pytest.raises(ValueError):
        Molecule([Atom("F", aromatic=True)])
