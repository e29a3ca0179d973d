from __future__ import annotations

import pytest

from oracle_service.chem import parse_smiles
from oracle_service.descriptors import compute_descriptors


def descriptors(smiles: str):
    return compute_descriptors(parse_smiles(smiles))


class TestHBondCounts:
    def test_ethanol(self):
        d = descriptors("CCO")
        assert d.hba == 1
        assert d.hbd == 1

    def test_caffeine_has_no_donors(self):
        d = descriptors("Cn1cnc2c1c(=O)n(C)c(=O)n2C")
        assert d.hbd == 0
        assert d.hba == 6

    def test_pyrrole_nh_is_donor_not_acceptor(self):
        d = descriptors("c1cc[nH]c1")
        assert d.hbd == 1
        assert d.hba == 0

    def test_aniline(self):
        d = descriptors("Nc1ccccc1")
        assert d.hbd == 2
        assert d.hba == 1


class TestTPSA:
    def test_hand_summed_contributions(self):
        # ethanol: one OH -> 20.23
        assert descriptors("CCO").tpsa == pytest.approx(20.23)
        # aspirin: OH(20.23) + =O(17.07) + =O(17.07) + ester -O-(9.23)
        assert descriptors("CC(=O)Oc1ccccc1C(=O)O").tpsa == pytest.approx(63.60)
        # pyridine: aromatic n, two connections -> 12.89
        assert descriptors("c1ccncc1").tpsa == pytest.approx(12.89)
        # N-methylpyrrole: trisubstituted aromatic n -> 4.93
        assert descriptors("Cn1cccc1").tpsa == pytest.approx(4.93)

    def test_hydrocarbons_have_zero(self):
        assert descriptors("CCCCCC").tpsa == 0.0
        assert descriptors("c1ccccc1").tpsa == 0.0


class TestRotatableBonds:
    @pytest.mark.parametrize(
        "smiles,count",
        [
            ("CCCC", 1),
            ("CCCCCCCC", 5),
            ("c1ccccc1", 0),
            ("c1ccc(cc1)-c1ccccc1", 1),
            ("CC(=O)Oc1ccccc1C(=O)O", 3),
            ("C1CCCCC1", 0),
        ],
    )
    def test_counts(self, smiles, count):
        assert descriptors(smiles).rotatable_bonds == count


class TestRingsAndAromatics:
    def test_aromatic_ring_count(self):
        assert descriptors("c1ccccc1").aromatic_rings == 1
        assert descriptors("c1ccc2ccccc2c1").aromatic_rings == 2
        assert descriptors("C1CCCCC1").aromatic_rings == 0
        assert descriptors("C1CCCCC1c1ccccc1").aromatic_rings == 1

    def test_macrocycle_size(self):
        assert descriptors("C1CCCCCCCCCCC1").max_ring_size == 12


class TestAlerts:
    @pytest.mark.parametrize(
        "smiles,count",
        [
            ("CC(=O)Cl", 1),            # acyl chloride
            ("CS", 1),                  # thiol
            ("COOC", 1),                # peroxide
            ("C(Cl)(Cl)Cl", 1),         # chloroform carbon
            ("c1ccccc1[N+](=O)[O-]", 1),  # nitro
            ("CN=NC", 1),               # diazo
            ("CCO", 0),
            ("CC(=O)Oc1ccccc1C(=O)O", 0),
        ],
    )
    def test_panel(self, smiles, count):
        assert descriptors(smiles).alerts == count


class TestLogP:
    def test_directional_sanity(self):
        assert descriptors("CCCCCCCC").logp > descriptors("CCO").logp
        assert descriptors("c1ccccc1").logp > 1.5
        assert descriptors("OCC(O)C(O)C(O)C(O)CO").logp < 0.0

    def test_benzene_near_textbook_value(self):
        assert descriptors("c1ccccc1").logp == pytest.approx(2.02, abs=0.05)
