"""Physicochemical descriptors on the molecular graph.

These power the drug-likeness and synthetic-accessibility scorers when the
reference toolkit is unavailable.  Polar surface area uses the core
Ertl-style fragment contributions for nitrogen and oxygen environments;
logP is a coarse atom-contribution estimate calibrated against a handful
of textbook values (benzene ~2.1, ethanol ~-0.3, aspirin ~1.2) and is
documented as an approximation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chem import MoleculeGraph

__all__ = ["DescriptorSet", "compute_descriptors"]


@dataclass(frozen=True)
class DescriptorSet:
    molecular_weight: float
    logp: float
    hba: int
    hbd: int
    tpsa: float
    rotatable_bonds: int
    aromatic_rings: int
    alerts: int
    heavy_atoms: int
    rings: int
    max_ring_size: int
    charged_atoms: int

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _hbd(mol: MoleculeGraph) -> int:
    return sum(atom.hydrogens for atom in mol.atoms if atom.element in ("N", "O"))


def _hba(mol: MoleculeGraph) -> int:
    count = 0
    for atom in mol.atoms:
        if atom.element == "O" and atom.charge <= 0:
            count += 1
        elif atom.element == "N" and atom.charge <= 0:
            # Pyrrole-type aromatic NH donates its lone pair to the ring.
            if atom.aromatic and atom.hydrogens > 0:
                continue
            count += 1
    return count


def _tpsa(mol: MoleculeGraph) -> float:
    """Ertl-style contributions for the common N/O environments."""
    area = 0.0
    for index, atom in enumerate(mol.atoms):
        orders = [order for _, order in mol.neighbors(index)]
        double_bonds = sum(1 for o in orders if o == 2.0)
        triple_bonds = sum(1 for o in orders if o == 3.0)
        h = atom.hydrogens
        if atom.element == "N":
            if atom.charge > 0:
                area += 4.44 if not h else (16.61 if h == 1 else 27.64)
            elif atom.aromatic:
                if h:
                    area += 15.79
                else:
                    # Trisubstituted aromatic nitrogens shield the lone pair.
                    area += 4.93 if len(orders) >= 3 else 12.89
            elif triple_bonds:
                area += 23.79
            elif double_bonds:
                area += 12.36
            elif h == 0:
                area += 3.24
            elif h == 1:
                area += 12.03
            else:
                area += 26.02
        elif atom.element == "O":
            if atom.charge < 0:
                area += 23.06
            elif atom.aromatic:
                area += 13.14
            elif double_bonds:
                area += 17.07
            elif h:
                area += 20.23
            else:
                area += 9.23
        elif atom.element == "S":
            # Sulfur contributes in the extended parameterization.
            if atom.aromatic:
                area += 28.24 if h else 0.0
            elif h:
                area += 38.80
    return area


_LOGP_CARBON_AROMATIC = 0.337
_LOGP_CARBON = 0.36
_LOGP = {
    "F": 0.2,
    "Cl": 0.7,
    "Br": 0.9,
    "I": 1.1,
    "S": 0.2,
    "P": -0.5,
    "B": 0.0,
}


def _logp(mol: MoleculeGraph) -> float:
    total = 0.0
    for index, atom in enumerate(mol.atoms):
        orders = [order for _, order in mol.neighbors(index)]
        double_bonds = sum(1 for o in orders if o == 2.0)
        if atom.element == "C":
            total += _LOGP_CARBON_AROMATIC if atom.aromatic else _LOGP_CARBON
        elif atom.element == "O":
            if double_bonds:
                total += -0.25
            elif atom.hydrogens:
                total += -0.80
            else:
                total += -0.55
        elif atom.element == "N":
            total += -0.55 if atom.aromatic else -1.0
        else:
            total += _LOGP.get(atom.element, -0.3)
        total += -0.5 * abs(atom.charge)
    return total


def _rotatable_bonds(mol: MoleculeGraph) -> int:
    ring_bonds = mol.ring_bonds()
    count = 0
    for a, b, order in mol.bonds:
        if order != 1.0 or frozenset((a, b)) in ring_bonds:
            continue
        if mol.degree(a) < 2 or mol.degree(b) < 2:
            continue
        count += 1
    return count


def _aromatic_rings(mol: MoleculeGraph) -> int:
    return sum(
        1
        for ring in mol.rings()
        if all(mol.atoms[index].aromatic for index in ring)
    )


def _alerts(mol: MoleculeGraph) -> int:
    """Count of simple structural liabilities (a small built-in panel):
    nitro groups, acyl halides, trihalomethyls with heavy halogens,
    peroxides, thiols, and N=N linkages."""
    alerts = 0
    for index, atom in enumerate(mol.atoms):
        neighbors = mol.neighbors(index)
        if atom.element == "N":
            oxygen_orders = [
                order for j, order in neighbors if mol.atoms[j].element == "O"
            ]
            if len(oxygen_orders) >= 2 and any(o == 2.0 for o in oxygen_orders):
                alerts += 1  # nitro
        if atom.element == "C":
            has_carbonyl = any(
                mol.atoms[j].element == "O" and order == 2.0 for j, order in neighbors
            )
            heavy_halides = [
                j for j, _ in neighbors if mol.atoms[j].element in ("Cl", "Br", "I")
            ]
            if has_carbonyl and heavy_halides:
                alerts += 1  # acyl halide
            halogen_count = sum(
                1 for j, _ in neighbors
                if mol.atoms[j].element in ("F", "Cl", "Br", "I")
            )
            if halogen_count >= 3 and heavy_halides:
                alerts += 1  # trihalomethyl
        if atom.element == "S" and atom.hydrogens > 0:
            alerts += 1  # thiol
    for a, b, order in mol.bonds:
        pair = (mol.atoms[a].element, mol.atoms[b].element)
        if pair == ("O", "O") and order == 1.0:
            alerts += 1  # peroxide
        if pair == ("N", "N") and order >= 2.0:
            alerts += 1  # diazo / azide linkage
    return alerts


def compute_descriptors(mol: MoleculeGraph) -> DescriptorSet:
    rings = mol.rings()
    return DescriptorSet(
        molecular_weight=mol.molecular_weight(),
        logp=_logp(mol),
        hba=_hba(mol),
        hbd=_hbd(mol),
        tpsa=_tpsa(mol),
        rotatable_bonds=_rotatable_bonds(mol),
        aromatic_rings=_aromatic_rings(mol),
        alerts=_alerts(mol),
        heavy_atoms=mol.heavy_atoms,
        rings=len(rings),
        max_ring_size=max((len(r) for r in rings), default=0),
        charged_atoms=sum(1 for atom in mol.atoms if atom.charge != 0),
    )
