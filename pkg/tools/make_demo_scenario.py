#!/usr/bin/env python3
"""Build the bundled demo scenario (corpus + mock script + config).

The scenario: 5 scientists, 3 proposals each, 2 votes each, 3 rounds, full
profiles, mock backend and oracle.  It exercises one proposal repair, one
duplicate proposal, one self-critique replacement, and one cross-critique
repair.  The script writes src/moldebate/data/demo/ and prints the facts a
test can pin (expected pool size, scientists, per-round additions), derived
from its own bookkeeping rather than from running the engine.
"""

from __future__ import annotations

import json
from pathlib import Path

from moldebate.chem import parse

OUT = Path(__file__).resolve().parent.parent / "src" / "moldebate" / "data" / "demo"

PUBLICATIONS = [
    {
        "id": "p1",
        "title": "kinase inhibitor kinase design",
        "abstract": "kinase inhibitor scaffolds for selective binding",
        "authors": ["chen", "wu", "park"],
        "year": 2021,
    },
    {
        "id": "p2",
        "title": "kinase inhibitor fragment screening",
        "abstract": "kinase hits from a curated fragment library panel",
        "authors": ["okafor"],
        "year": 2020,
    },
    {
        "id": "p3",
        "title": "kinase selectivity and binding profiles",
        "abstract": "inhibitor selectivity across a small assay panel set",
        "authors": ["silva", "novak"],
        "year": 2022,
    },
    {
        "id": "p4",
        "title": "allosteric kinase modulation notes",
        "abstract": "case studies of pocket plasticity and binding",
        "authors": ["chen", "silva"],
        "year": 2019,
    },
    {
        "id": "p5",
        "title": "continuous flow chemistry hardware",
        "abstract": "reactor designs for telescoped synthesis",
        "authors": ["zhang"],
        "year": 2023,
    },
]

MOLECULES = {
    "chen": ["CCOc1ccccc1", "CCN(CC)CC"],
    "park": ["c1ccc2[nH]ccc2c1"],
    "okafor": ["CC(=O)Nc1ccccc1"],
    "silva": ["OCCN1CCCC1", "COc1ccccc1O"],
    "novak": ["Clc1ccccc1Cl"],
}

# Per-agent proposals; agents run in sorted id order:
# chen, novak, okafor, park, silva.
PROPOSALS = {
    1: {
        "chen": ["INVALID((", "CCOc1ccccc1C", "Nc1ccc(Cl)cc1"],
        "novak": ["Clc1cccc(Cl)c1", "CCN1CCOCC1", "OCc1ccncc1"],
        "okafor": ["OCC", "CC(=O)Nc1ccc(O)cc1", "CCS(=O)(=O)N"],
        "park": ["CCO", "c1ccc2[nH]ccc2c1", "CC(C)(C)c1ccccc1"],
        "silva": ["OCCN1CCCC1", "Fc1ccc(F)cc1", "CC(=O)OC1CCCC1"],
    },
    2: {
        "chen": ["COc1ccc(N)cc1", "CCOC(=O)C1CC1", "N#Cc1ccccc1"],
        "novak": ["OC1CCCCC1", "c1ccsc1", "CCOCC"],
        "okafor": ["CN1CCNCC1", "Oc1ccc(Br)cc1", "CC(C)NCC(O)c1ccccc1"],
        "park": ["CCc1ccccc1", "OC(=O)CC(O)C(=O)O", "c1ccoc1"],
        "silva": ["ClCC(=O)N", "CC1CCCCC1N", "OCc1ccc(O)cc1"],
    },
    3: {
        "chen": ["CC(=O)c1ccc(C)cc1", "CCCCN", "OC(c1ccccc1)c1ccccc1"],
        "novak": ["CCOC(=O)N", "c1cnc2[nH]ccc2c1", "CC(C)(O)CC"],
        "okafor": ["CC(N)C(=O)O", "c1ccc(cc1)C(=O)NC", "OCCOCCO"],
        "park": ["CC(C)Oc1ccccc1", "NCc1ccccc1", "O=C1CCCCC1"],
        "silva": ["CCNC(=O)c1ccccc1", "CC(O)CN", "Cc1ccc(cc1)S(N)(=O)=O"],
    },
}
REPAIR = {("chen", 1): ["OC(=O)c1ccccc1"]}
REPLACEMENT = {("silva", 2): ("ClCC(=O)N", "NCC(=O)N")}

AGENTS = ["chen", "novak", "okafor", "park", "silva"]


def canon(smiles: str) -> str:
    return parse(smiles).canonical


def score_for(agent: str, smiles: str, round_: int) -> float:
    """Deterministic varied ballot scores in [0.05, 0.95]."""
    basis = sum(ord(c) for c in f"{agent}:{smiles}:{round_}")
    return round(0.05 + (basis % 90) / 100.0, 2)


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)

    (OUT / "publications.jsonl").write_text(
        "\n".join(json.dumps(p) for p in PUBLICATIONS) + "\n", encoding="utf-8"
    )
    molecule_rows = []
    for scientist, smiles_list in MOLECULES.items():
        for smiles in smiles_list:
            canon(smiles)  # must parse
            molecule_rows.append(
                {"smiles": smiles, "scientist_ids": [scientist], "source_publication": None}
            )
    (OUT / "molecules.jsonl").write_text(
        "\n".join(json.dumps(r) for r in molecule_rows) + "\n", encoding="utf-8"
    )

    script: list[dict] = []

    def respond(agent: str, round_: int, phase: str, response: str) -> None:
        script.append(
            {"agent": agent, "round": round_, "phase": phase, "response": response}
        )

    # Round-0 profile-construction responses so the demo also runs under
    # --mode role and --mode llm_generated (unused by the default full mode).
    for agent in AGENTS:
        respond(
            agent, 0, "role_generation",
            f"You are a medicinal chemist known as {agent}, specializing in "
            "kinase inhibitor design and selectivity profiling.",
        )
        respond(
            agent, 0, "llm_profile_pub",
            "```json\n"
            + json.dumps(
                [
                    {
                        "title": f"Fabricated kinase study by {agent}",
                        "abstract": "A plausible but invented abstract.",
                    }
                ]
            )
            + "\n```",
        )
        respond(
            agent, 0, "llm_profile_mol",
            "```json\n" + json.dumps([MOLECULES[agent][0], "hallucinated(("]) + "\n```",
        )

    pool: dict[str, int] = {}  # canonical -> round added (bookkeeping)
    own: dict[str, list[str]] = {a: [] for a in AGENTS}  # raw accepted strings
    additions = {1: 0, 2: 0, 3: 0}
    duplicates = 0

    for round_ in (1, 2, 3):
        # proposals
        for agent in AGENTS:
            entries = [
                {"smiles": s, "rationale": f"{agent} round {round_} design"}
                for s in PROPOSALS[round_][agent]
            ]
            respond(agent, round_, "proposal", "```json\n" + json.dumps(entries) + "\n```")
            if (agent, round_) in REPAIR:
                fixed = [
                    {"smiles": s, "rationale": "repaired"}
                    for s in REPAIR[(agent, round_)]
                ]
                respond(
                    agent, round_, "proposal_repair", "```json\n" + json.dumps(fixed) + "\n```"
                )
        # bookkeeping mirror of the merge rule (agent order, dedup)
        for agent in AGENTS:
            accepted = []
            for smiles in PROPOSALS[round_][agent]:
                try:
                    c = canon(smiles)
                except Exception:
                    continue
                accepted.append(smiles)
                if c not in pool:
                    pool[c] = round_
                    additions[round_] += 1
                else:
                    duplicates += 1
            for smiles in REPAIR.get((agent, round_), []):
                c = canon(smiles)
                accepted.append(smiles)
                if c not in pool:
                    pool[c] = round_
                    additions[round_] += 1
                else:
                    duplicates += 1
            own[agent].extend(accepted)

        # self critiques (every agent proposed something every round)
        for agent in AGENTS:
            entries = []
            for smiles in PROPOSALS[round_][agent]:
                try:
                    canon(smiles)
                except Exception:
                    continue
                entry = {"smiles": smiles, "critique": f"{agent} notes on {smiles}"}
                if REPLACEMENT.get((agent, round_), (None,))[0] == smiles:
                    replacement = REPLACEMENT[(agent, round_)][1]
                    entry["replacement"] = replacement
                entries.append(entry)
            respond(
                agent, round_, "critique_self", "```json\n" + json.dumps(entries) + "\n```"
            )
        for (agent, r), (_, replacement) in REPLACEMENT.items():
            if r == round_:
                c = canon(replacement)
                if c not in pool:
                    pool[c] = round_
                    additions[round_] += 1
                own[agent].append(replacement)

        # cross critiques: each agent reviews the next agent's first
        # round-1 valid proposal (fixed, deterministic targets).
        for i, agent in enumerate(AGENTS):
            if round_ == 3 and agent == "novak":
                respond(agent, round_, "critique_cross", "no structured critique, sorry")
            target_agent = AGENTS[(i + 1) % len(AGENTS)]
            target = next(
                s for s in PROPOSALS[1][target_agent] if not s.startswith("INVALID")
            )
            entries = [
                {
                    "smiles": target,
                    "critique": f"{agent} cross-review of {target_agent}'s design",
                }
            ]
            if i == 0:
                entries[0]["suggestion"] = "CCOc1ccccc1CC"
            phase = (
                "critique_cross_repair"
                if (round_ == 3 and agent == "novak")
                else "critique_cross"
            )
            respond(agent, round_, phase, "```json\n" + json.dumps(entries) + "\n```")

        # ballots: every agent scores everything it proposed so far
        for agent in AGENTS:
            ballot = {
                smiles: {
                    "task_relevance": score_for(agent, smiles, round_),
                    "synthetic_feasibility": score_for(agent, smiles, round_ + 7),
                    "novelty": score_for(agent, smiles, round_ + 13),
                }
                for smiles in own[agent]
            }
            respond(agent, round_, "voting", "```json\n" + json.dumps(ballot) + "\n```")

    (OUT / "script.jsonl").write_text(
        "\n".join(json.dumps(row) for row in script) + "\n", encoding="utf-8"
    )

    config = {
        "task": {
            "id": "demo-kinase",
            "objective": "bioactivity",
            "description": "kinase inhibitor",
            "keywords": ["kinase", "inhibitor"],
            "property": "gsk3b",
        },
        "profile": {"mode": "full", "max_pubs": 3, "max_mols": 5},
        "debate": {
            "n_scientists": 5,
            "proposals_per_agent": 3,
            "votes_per_agent": 2,
            "max_rounds": 3,
            "candidate_budget": 1000,
            "cross_sample": 4,
            "parallelism": 1,
            "seed": 11,
        },
        "backend": {"kind": "mock", "script": "script.jsonl"},
        "oracle": {"kind": "mock", "seed": 0},
        "paths": {
            "publications": "publications.jsonl",
            "molecules": "molecules.jsonl",
            "output_dir": "runs",
        },
    }
    (OUT / "config.json").write_text(
        json.dumps(config, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )

    facts = {
        "expected_pool_size": len(pool),
        "per_round_additions": additions,
        "duplicates": duplicates,
        "agents_sorted": AGENTS,
        "script_lines": len(script),
    }
    print(json.dumps(facts, indent=2))


if __name__ == "__main__":
    main()
