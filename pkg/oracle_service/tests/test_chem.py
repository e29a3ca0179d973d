from __future__ import annotations

import pytest

from oracle_service.chem import SmilesError, environment_ids, fingerprint_bits, parse_smiles


def test_single_atom():
    mol = parse_smiles("C")
    assert mol.heavy_atoms == 1
    assert mol.atoms[0].hydrogens == 4  # methane


def test_implicit_hydrogens_standard_valences():
    cases = {
        "CCO": [3, 2, 1],      # ethanol
        "C=O": [2, 0],         # formaldehyde
        "C#N": [1, 0],         # hydrogen cyanide
        "c1ccccc1": [1] * 6,   # benzene
        "c1ccncc1": [1, 1, 1, 0, 1, 1],  # pyridine
        "CCS(=O)(=O)N": [3, 2, 0, 0, 0, 2],  # sulfonamide S escalates to 6
    }
    for smiles, expected in cases.items():
        mol = parse_smiles(smiles)
        assert [a.hydrogens for a in mol.atoms] == expected, smiles


def test_aromatic_nitrogen_never_escalates():
    caffeine = parse_smiles("Cn1cnc2c1c(=O)n(C)c(=O)n2C")
    assert sum(a.hydrogens for a in caffeine.atoms if a.element == "N") == 0
    assert parse_smiles("c1cc[nH]c1").atoms[3].hydrogens == 1


def test_bracket_atoms():
    ammonium = parse_smiles("[NH4+]")
    assert ammonium.atoms[0].charge == 1
    assert ammonium.atoms[0].hydrogens == 4
    assert parse_smiles("[C]").atoms[0].hydrogens == 0


def test_molecular_weight_hand_computed():
    # ethanol: 2 C + 1 O + 6 H
    ethanol = parse_smiles("CCO")
    assert ethanol.molecular_weight() == pytest.approx(
        2 * 12.011 + 15.999 + 6 * 1.008, abs=1e-9
    )
    benzene = parse_smiles("c1ccccc1")
    assert benzene.molecular_weight() == pytest.approx(6 * 12.011 + 6 * 1.008, abs=1e-9)


def test_rings_and_ring_bonds():
    biphenyl = parse_smiles("c1ccc(cc1)-c1ccccc1")
    assert len(biphenyl.rings()) == 2
    assert len(biphenyl.ring_bonds()) == 12  # the linker bond is a bridge
    assert len(parse_smiles("CCCC").rings()) == 0


def test_disconnected_components():
    salt = parse_smiles("[Na+].[Cl-]")
    assert salt.heavy_atoms == 2
    assert salt.bonds == []


def test_percent_ring_closure():
    assert len(parse_smiles("C%12CCCCC%12").rings()) == 1


@pytest.mark.parametrize(
    "bad",
    ["", "   ", "C(", "C)", "[CH3", "C1CC", "CC==O", "Xx", "[zz]", "C..C", "C="],
)
def test_syntax_errors(bad):
    with pytest.raises(SmilesError):
        parse_smiles(bad)


def test_environment_ids_deterministic():
    a = environment_ids(parse_smiles("CC(=O)Oc1ccccc1C(=O)O"))
    b = environment_ids(parse_smiles("CC(=O)Oc1ccccc1C(=O)O"))
    assert a == b


def test_fingerprint_bits_shape():
    bits = fingerprint_bits(parse_smiles("CCO"), radius=2, nbits=512)
    assert len(bits) == 512
    assert set(bits) <= {0, 1}
    assert sum(bits) > 0
