"""Canonical SMILES emission.

Atoms are ranked by iterative neighborhood refinement: the initial rank key
is (element, charge, degree, aromatic, explicit-H count), then each round
extends an atom's key with the multiset of (bond order, neighbor rank)
pairs until the partition stops splitting.  If symmetry leaves a rank class
with several atoms, one atom of the first such class is individualized and
refinement re-run, recursing over every choice and keeping the
lexicographically smallest emitted string, so the output is independent of
input atom order.  Emission is a depth-first traversal from the
lowest-ranked atom, visiting neighbors in rank order.

Isotopes are not part of the rank key and are not emitted: canonical form
works at the graph level the fingerprints see.  Disconnected components are
canonicalized independently, sorted, and joined with ``.``.
"""

from __future__ import annotations

from collections import Counter

from .mol import AROMATIC_ELEMENTS, Atom, BondOrder, Molecule
from .parser import AROMATIC_ORGANIC, ORGANIC_SUBSET

__all__ = ["canonicalize", "canonical_smiles"]


def canonicalize(mol: Molecule) -> str:
    """Canonical SMILES of ``mol`` (cached on the molecule)."""
    return mol.canonical


def canonical_smiles(mol: Molecule) -> str:
    parts = [
        _component_canonical(mol, component) for component in _components(mol)
    ]
    parts.sort()
    return ".".join(parts)


def _components(mol: Molecule) -> list[list[int]]:
    seen: set[int] = set()
    components = []
    for start in range(len(mol)):
        if start in seen:
            continue
        stack = [start]
        seen.add(start)
        component = []
        while stack:
            index = stack.pop()
            component.append(index)
            for neighbor, _ in mol.neighbors(index):
                if neighbor not in seen:
                    seen.add(neighbor)
                    stack.append(neighbor)
        components.append(sorted(component))
    return components


class _Subgraph:
    """A component of a molecule, re-indexed to 0..n-1."""

    def __init__(self, mol: Molecule, indices: list[int]):
        remap = {original: local for local, original in enumerate(indices)}
        self.atoms: list[Atom] = [mol.atoms[i] for i in indices]
        self.adjacency: list[list[tuple[int, BondOrder]]] = [
            sorted((remap[j], order) for j, order in mol.neighbors(i))
            for i in indices
        ]
        self.n = len(indices)


def _component_canonical(mol: Molecule, indices: list[int]) -> str:
    graph = _Subgraph(mol, indices)
    ranks = _refine(graph, _initial_ranks(graph))
    return _best_string(graph, ranks)


def _initial_ranks(graph: _Subgraph) -> list[int]:
    keys = [
        (
            atom.element,
            atom.charge,
            len(graph.adjacency[i]),
            atom.aromatic,
            -1 if atom.hcount is None else atom.hcount,
        )
        for i, atom in enumerate(graph.atoms)
    ]
    return _dense(keys)


def _dense(keys: list) -> list[int]:
    order = {key: rank for rank, key in enumerate(sorted(set(keys)))}
    return [order[key] for key in keys]


def _refine(graph: _Subgraph, ranks: list[int]) -> list[int]:
    classes = len(set(ranks))
    while True:
        keys = [
            (
                ranks[i],
                tuple(sorted((int(order), ranks[j]) for j, order in graph.adjacency[i])),
            )
            for i in range(graph.n)
        ]
        new_ranks = _dense(keys)
        new_classes = len(set(new_ranks))
        if new_classes == classes:
            return new_ranks
        ranks, classes = new_ranks, new_classes


def _view_signature(graph: _Subgraph, ranks: list[int], index: int) -> tuple:
    """How the ranked graph looks from ``index``: sorted ranks per BFS layer.

    Atoms in the same automorphism orbit always share a signature, so
    branching over one representative per signature collapses the factorial
    blowup on symmetric graphs (identical substituents, plain rings).  The
    converse can fail only on distance-regular pathologies far denser than
    molecular graphs allow.
    """
    depth = {index: 0}
    frontier = [index]
    layers = []
    while frontier:
        layers.append(tuple(sorted(ranks[j] for j in frontier)))
        advance = []
        for u in frontier:
            for v, _ in graph.adjacency[u]:
                if v not in depth:
                    depth[v] = depth[u] + 1
                    advance.append(v)
        frontier = advance
    return tuple(layers)


def _best_string(graph: _Subgraph, ranks: list[int]) -> str:
    counts = Counter(ranks)
    tied = sorted(rank for rank, count in counts.items() if count > 1)
    if not tied:
        return _emit(graph, ranks)
    cell = [i for i in range(graph.n) if ranks[i] == tied[0]]
    best: str | None = None
    tried: set[tuple] = set()
    for index in cell:
        signature = _view_signature(graph, ranks, index)
        if signature in tried:
            continue
        tried.add(signature)
        forced = [rank * 2 for rank in ranks]
        forced[index] -= 1
        candidate = _best_string(graph, _refine(graph, _dense(forced)))
        if best is None or candidate < best:
            best = candidate
    assert best is not None
    return best


def _bond_symbol(order: BondOrder, a: Atom, b: Atom) -> str:
    if order is BondOrder.DOUBLE:
        return "="
    if order is BondOrder.TRIPLE:
        return "#"
    if order is BondOrder.SINGLE and a.aromatic and b.aromatic:
        # Without the explicit '-' a bond between aromatic atoms would be
        # re-read as aromatic (e.g. the biphenyl linker).
        return "-"
    return ""


def _atom_token(atom: Atom) -> str:
    symbol = atom.element.lower() if atom.aromatic else atom.element
    plain = (
        atom.charge == 0
        and atom.hcount is None
        and atom.element in ORGANIC_SUBSET
        and (not atom.aromatic or symbol in AROMATIC_ORGANIC)
    )
    if plain:
        return symbol
    if atom.aromatic and atom.element not in AROMATIC_ELEMENTS:
        raise ValueError(f"element {atom.element!r} cannot be aromatic")
    hcount = atom.hcount or 0
    if hcount == 0:
        h_text = ""
    elif hcount == 1:
        h_text = "H"
    else:
        h_text = f"H{hcount}"
    if atom.charge == 0:
        charge_text = ""
    elif atom.charge == 1:
        charge_text = "+"
    elif atom.charge == -1:
        charge_text = "-"
    else:
        charge_text = f"{atom.charge:+d}"
    return f"[{symbol}{h_text}{charge_text}]"


def _emit(graph: _Subgraph, ranks: list[int]) -> str:
    """Write the component as SMILES; ``ranks`` must be a total order."""
    start = ranks.index(min(ranks))

    # Pass 1: classify edges into tree and ring edges with a DFS that visits
    # neighbors in rank order.
    children: dict[int, list[tuple[int, BondOrder]]] = {i: [] for i in range(graph.n)}
    ring_bonds: dict[int, list[tuple[int, BondOrder]]] = {i: [] for i in range(graph.n)}
    parent: dict[int, int] = {}
    visited: set[int] = set()
    stack: list[tuple[int, int]] = [(start, -1)]
    ring_pairs: set[frozenset[int]] = set()
    while stack:
        node, from_node = stack.pop()
        if node in visited:
            continue
        visited.add(node)
        if from_node >= 0:
            parent[node] = from_node
        ordered = sorted(graph.adjacency[node], key=lambda item: ranks[item[0]])
        for neighbor, order in ordered:
            if neighbor not in visited:
                continue
            if neighbor == parent.get(node):
                continue
            pair = frozenset((node, neighbor))
            if pair not in ring_pairs:
                ring_pairs.add(pair)
                ring_bonds[node].append((neighbor, order))
                ring_bonds[neighbor].append((node, order))
        for neighbor, order in reversed(ordered):
            if neighbor not in visited:
                stack.append((neighbor, node))

    # Children in rank order (the DFS above only classified edges).
    for node in visited:
        kids = [
            (neighbor, order)
            for neighbor, order in graph.adjacency[node]
            if parent.get(neighbor) == node
        ]
        kids.sort(key=lambda item: ranks[item[0]])
        children[node] = kids

    # Pass 2: emit, allocating ring-closure markers in emission order and
    # reusing them once closed.
    tokens: list[str] = []
    open_markers: dict[frozenset[int], int] = {}
    in_use: set[int] = set()

    def marker_text(marker: int) -> str:
        return str(marker) if marker < 10 else f"%{marker:02d}"

    def ring_tokens(node: int) -> str:
        text = ""
        for neighbor, order in sorted(
            ring_bonds[node], key=lambda item: ranks[item[0]]
        ):
            pair = frozenset((node, neighbor))
            if pair in open_markers:
                marker = open_markers.pop(pair)
                in_use.discard(marker)
                text += marker_text(marker)
            else:
                marker = 1
                while marker in in_use:
                    marker += 1
                if marker > 99:
                    raise ValueError("more than 99 simultaneously open rings")
                in_use.add(marker)
                open_markers[pair] = marker
                text += _bond_symbol(order, graph.atoms[node], graph.atoms[neighbor])
                text += marker_text(marker)
        return text

    # Explicit stack of closures to avoid recursion limits on long chains.
    work: list[tuple[str, int, BondOrder | None]] = [("walk", start, None)]
    while work:
        action, payload, order = work.pop()
        if action == "text":
            tokens.append(payload)  # type: ignore[arg-type]
            continue
        node = payload
        if order is not None:
            tokens.append(
                _bond_symbol(order, graph.atoms[parent[node]], graph.atoms[node])
            )
        tokens.append(_atom_token(graph.atoms[node]))
        tokens.append(ring_tokens(node))
        kids = children[node]
        if not kids:
            continue
        pushes: list[tuple[str, int, BondOrder | None]] = []
        for child, child_order in kids[:-1]:
            pushes.append(("text", "(", None))  # type: ignore[list-item]
            pushes.append(("walk", child, child_order))
            pushes.append(("text", ")", None))  # type: ignore[list-item]
        last_child, last_order = kids[-1]
        pushes.append(("walk", last_child, last_order))
        work.extend(reversed(pushes))
    return "".join(tokens)
