#!/usr/bin/env python3
"""Build the bundled fragment-frequency table for the SA fallback scorer.

Counts radius-2 circular environments over a reference molecule list and
stores each environment's log10(1 + count), normalized so the most common
environment scores about 2.5 and rare ones near 0.  The reference list is
the drug-like corpus bundled with the debate engine's test data; only this
build script reads it, the service ships the resulting table.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from pathlib import Path

from oracle_service.chem import environment_ids, parse_smiles

REFERENCE = Path(__file__).resolve().parents[2] / "tests" / "data" / "smiles_corpus.txt"
OUT = (
    Path(__file__).resolve().parents[1]
    / "src"
    / "oracle_service"
    / "data"
    / "fragment_scores.json"
)


def main() -> None:
    counts: Counter[int] = Counter()
    molecules = 0
    for line in REFERENCE.read_text(encoding="utf-8").splitlines():
        if not line or line.startswith("!"):
            continue
        try:
            mol = parse_smiles(line)
        except Exception:
            continue
        molecules += 1
        for identifier in environment_ids(mol, 2)[2]:
            counts[identifier] += 1
    peak = math.log10(1 + max(counts.values()))
    scores = {
        str(identifier): round(math.log10(1 + count) / peak * 2.5, 4)
        for identifier, count in counts.items()
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(
        json.dumps(
            {"radius": 2, "molecules": molecules, "scores": scores},
            sort_keys=True,
        ),
        encoding="utf-8",
    )
    print(f"wrote {OUT}: {len(scores)} environments from {molecules} molecules")


if __name__ == "__main__":
    main()
