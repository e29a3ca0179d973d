"""SMILES parser.

Supported grammar: organic-subset atoms (B, C, N, O, P, S, F, Cl, Br, I)
and their aromatic lowercase forms, bracket atoms with isotope / charge /
explicit hydrogens, branches, ring closures (digits and ``%nn``), the bond
symbols ``- = # :``, and ``.`` for disconnected components.  Stereo markers
(``/``, ``\\``, ``@``, ``@@``) are accepted but discarded; each discard
emits a :class:`StereoDiscardedWarning`.

Valences are never checked and aromatic flags are taken as written; see
:mod:`moldebate.chem.mol`.
"""

from __future__ import annotations

import re
import warnings

from ..errors import ParseError
from .mol import Atom, Bond, BondOrder, Molecule

__all__ = ["parse", "StereoDiscardedWarning"]


class StereoDiscardedWarning(UserWarning):
    """Raised once per parse that drops stereochemistry markers."""


ORGANIC_SUBSET = frozenset({"B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I"})
AROMATIC_ORGANIC = frozenset({"b", "c", "n", "o", "p", "s"})
#: Lowercase element spellings allowed inside brackets.
AROMATIC_BRACKET = frozenset({"b", "c", "n", "o", "p", "s", "se", "as"})

ELEMENTS = frozenset(
    """H He Li Be B C N O F Ne Na Mg Al Si P S Cl Ar K Ca Sc Ti V Cr Mn Fe Co
    Ni Cu Zn Ga Ge As Se Br Kr Rb Sr Y Zr Nb Mo Tc Ru Rh Pd Ag Cd In Sn Sb Te
    I Xe Cs Ba La Ce Pr Nd Pm Sm Eu Gd Tb Dy Ho Er Tm Yb Lu Hf Ta W Re Os Ir
    Pt Au Hg Tl Pb Bi Po At Rn Fr Ra Ac Th Pa U Np Pu Am Cm Bk Cf Es Fm Md No
    Lr Rf Db Sg Bh Hs Mt Ds Rg Cn Nh Fl Mc Lv Ts Og""".split()
)

_BOND_SYMBOLS = {
    "-": BondOrder.SINGLE,
    "=": BondOrder.DOUBLE,
    "#": BondOrder.TRIPLE,
    ":": BondOrder.AROMATIC,
}

_BRACKET_RE = re.compile(
    r"""^(?P<isotope>\d+)?
         (?P<element>[A-Z][a-z]?|[a-z]{1,2})
         (?P<stereo>@{1,2})?
         (?P<hcount>H\d*)?
         (?P<charge>\+\d+|-\d+|\++|-+)?$""",
    re.VERBOSE,
)


def _parse_bracket(body: str, offset: int, warnings_seen: list[str]) -> Atom:
    """Parse the text between ``[`` and ``]`` (exclusive)."""
    match = _BRACKET_RE.match(body)
    if match is None:
        raise ParseError(f"malformed bracket atom [{body}]", offset)
    symbol = match.group("element")
    aromatic = symbol.islower()
    if aromatic:
        if symbol not in AROMATIC_BRACKET:
            raise ParseError(f"unknown aromatic element {symbol!r}", offset)
        element = symbol.capitalize()
    else:
        element = symbol
    if element not in ELEMENTS:
        raise ParseError(f"unknown element {element!r}", offset)
    if match.group("stereo"):
        warnings_seen.append(match.group("stereo"))
    hcount_text = match.group("hcount")
    if hcount_text is None:
        hcount = 0
    elif hcount_text == "H":
        hcount = 1
    else:
        hcount = int(hcount_text[1:])
    charge_text = match.group("charge")
    if charge_text is None:
        charge = 0
    elif charge_text[-1].isdigit():
        charge = int(charge_text)
    else:
        charge = len(charge_text) * (1 if charge_text[0] == "+" else -1)
    isotope_text = match.group("isotope")
    isotope = int(isotope_text) if isotope_text is not None else None
    return Atom(element, charge=charge, aromatic=aromatic, hcount=hcount, isotope=isotope)


def parse(smiles: str) -> Molecule:
    """Parse a SMILES string into a :class:`Molecule`.

    Raises :class:`~moldebate.errors.ParseError` (carrying the byte offset)
    on syntax errors: unbalanced parentheses or brackets, unmatched ring
    closures, unknown elements, misplaced bond symbols.
    """
    if not isinstance(smiles, str):
        raise TypeError(f"expected str, got {type(smiles).__name__}")
    if not smiles:
        raise ParseError("empty SMILES", 0)

    atoms: list[Atom] = []
    bonds: list[Bond] = []
    bonded: set[frozenset[int]] = set()
    prev: int | None = None
    # Bond symbol waiting for its second atom: (order, offset of the symbol).
    pending: tuple[BondOrder, int] | None = None
    branch_stack: list[tuple[int, int]] = []  # (atom index to return to, '(' offset)
    open_rings: dict[int, tuple[int, BondOrder | None, int]] = {}
    stereo_seen: list[str] = []
    dangling_dot: int | None = None

    def add_bond(a: int, b: int, order: BondOrder | None, offset: int) -> None:
        if a == b:
            raise ParseError("ring closure bonds an atom to itself", offset)
        pair = frozenset((a, b))
        if pair in bonded:
            raise ParseError(f"duplicate bond between atoms {a} and {b}", offset)
        if order is None:
            both_aromatic = atoms[a].aromatic and atoms[b].aromatic
            order = BondOrder.AROMATIC if both_aromatic else BondOrder.SINGLE
        if order is BondOrder.AROMATIC and not (atoms[a].aromatic and atoms[b].aromatic):
            raise ParseError("aromatic bond requires two aromatic atoms", offset)
        bonded.add(pair)
        bonds.append(Bond(a, b, order))

    def add_atom(atom: Atom, offset: int) -> None:
        nonlocal prev, pending, dangling_dot
        dangling_dot = None
        atoms.append(atom)
        index = len(atoms) - 1
        if prev is not None:
            order = pending[0] if pending is not None else None
            add_bond(prev, index, order, pending[1] if pending is not None else offset)
        elif pending is not None:
            raise ParseError("bond symbol with no preceding atom", pending[1])
        pending = None
        prev = index

    i = 0
    length = len(smiles)
    while i < length:
        ch = smiles[i]
        if ch == "(":
            if prev is None:
                raise ParseError("branch opened before any atom", i)
            if pending is not None:
                raise ParseError("bond symbol before branch open", pending[1])
            branch_stack.append((prev, i))
            i += 1
        elif ch == ")":
            if not branch_stack:
                raise ParseError("unbalanced ')'", i)
            if pending is not None:
                raise ParseError("dangling bond symbol before ')'", pending[1])
            prev = branch_stack.pop()[0]
            i += 1
        elif ch in _BOND_SYMBOLS:
            if pending is not None:
                raise ParseError("two consecutive bond symbols", i)
            if prev is None:
                raise ParseError("bond symbol before any atom", i)
            pending = (_BOND_SYMBOLS[ch], i)
            i += 1
        elif ch in "/\\":
            # Directional (cis/trans) single bond; direction is discarded.
            if pending is not None:
                raise ParseError("two consecutive bond symbols", i)
            if prev is None:
                raise ParseError("bond symbol before any atom", i)
            stereo_seen.append(ch)
            pending = (BondOrder.SINGLE, i)
            i += 1
        elif ch == ".":
            if pending is not None:
                raise ParseError("bond symbol before '.'", pending[1])
            if prev is None:
                raise ParseError("'.' must follow an atom", i)
            prev = None
            dangling_dot = i
            i += 1
        elif ch.isdigit() or ch == "%":
            if ch == "%":
                if i + 2 >= length or not smiles[i + 1 : i + 3].isdigit():
                    raise ParseError("'%' ring closure needs two digits", i)
                number = int(smiles[i + 1 : i + 3])
                width = 3
            else:
                number = int(ch)
                width = 1
            if prev is None:
                raise ParseError("ring closure before any atom", i)
            if number in open_rings:
                other, opening_order, _ = open_rings.pop(number)
                order: BondOrder | None
                if pending is not None and opening_order is not None:
                    if pending[0] is not opening_order:
                        raise ParseError(
                            f"conflicting bond orders for ring closure {number}", i
                        )
                    order = opening_order
                else:
                    order = pending[0] if pending is not None else opening_order
                add_bond(other, prev, order, i)
            else:
                open_rings[number] = (prev, pending[0] if pending else None, i)
            pending = None
            i += width
        elif ch == "[":
            end = smiles.find("]", i + 1)
            if end == -1:
                raise ParseError("unbalanced '['", i)
            add_atom(_parse_bracket(smiles[i + 1 : end], i, stereo_seen), i)
            i = end + 1
        elif ch.isalpha():
            two = smiles[i : i + 2]
            if two in ORGANIC_SUBSET:  # Cl, Br
                add_atom(Atom(two), i)
                i += 2
            elif ch in ORGANIC_SUBSET:
                add_atom(Atom(ch), i)
                i += 1
            elif ch in AROMATIC_ORGANIC:
                add_atom(Atom(ch.upper(), aromatic=True), i)
                i += 1
            else:
                raise ParseError(f"unknown element {ch!r}", i)
        else:
            raise ParseError(f"unexpected character {ch!r}", i)

    if branch_stack:
        raise ParseError("unbalanced '('", branch_stack[0][1])
    if pending is not None:
        raise ParseError("dangling bond symbol at end of input", pending[1])
    if open_rings:
        number, (_, _, offset) = min(open_rings.items(), key=lambda kv: kv[1][2])
        raise ParseError(f"unmatched ring closure {number}", offset)
    if dangling_dot is not None:
        raise ParseError("'.' must be followed by an atom", dangling_dot)
    if not atoms:
        raise ParseError("no atoms in SMILES", 0)
    if stereo_seen:
        warnings.warn(
            f"discarded stereochemistry markers: {' '.join(sorted(set(stereo_seen)))}",
            StereoDiscardedWarning,
            stacklevel=2,
        )
    return Molecule(atoms, bonds)
