"""Scientist selection and expertise-profile construction.

A profile grounds one agent: publications chosen by task-keyword frequency
and molecules chosen by similarity to the seed (or by how often the
scientist's record repeats them).  Besides the full profile, every persona
variant studied alongside it is available: vanilla (empty), role text,
extracted keywords, a shared single profile, a massive union profile,
LLM-synthesized histories, and a seeded task-irrelevant random profile.

Every ranking has a total tie-break chain, so profile construction is
deterministic given (corpus, task, mode, rng seed) and safe to run for all
scientists concurrently.
"""

from __future__ import annotations

import json
import random
import warnings
from collections import Counter
from dataclasses import dataclass, replace

from .backend.base import Backend, ChatRequest, RequestTag
from .backend.parsing import _json_blobs
from .backend.templates import load_template, render
from .chem import morgan_fingerprint, parse, tanimoto
from .corpus import CorpusIndex, keyword_frequency, retrieve, tokenize
from .errors import ProfileError
from .oracle import ConstraintSet

__all__ = [
    "PROFILE_MODES",
    "TaskSpec",
    "Scientist",
    "ExpertiseProfile",
    "ProfileLimits",
    "select_scientists",
    "build_profile",
    "build_profiles",
]

PROFILE_MODES = (
    "vanilla",
    "role",
    "keyword",
    "full",
    "single",
    "massive_single",
    "llm_generated",
    "random",
)

OBJECTIVES = ("protein_target", "bioactivity", "lead_optimization")

# Minimal English stopword list for keyword extraction.
STOPWORDS = frozenset(
    """a an and are as at be been by for from has have in into is it its of on
    or that the their these this those to was we were which with within
    without our using use used based new study results show shown""".split()
)


@dataclass(frozen=True)
class TaskSpec:
    """A research objective: what the debate is trying to discover."""

    task_id: str
    objective: str
    description: str
    keywords: tuple[str, ...]
    seed: str | None = None
    oracle_property: str | None = None
    constraints: ConstraintSet | None = None

    def __post_init__(self) -> None:
        if self.objective not in OBJECTIVES:
            raise ValueError(f"unknown objective {self.objective!r}")
        if not self.keywords:
            raise ValueError("task keywords must be non-empty")
        if self.objective == "lead_optimization" and not self.seed:
            raise ValueError("lead optimization requires a seed molecule")
        if self.seed is not None:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                object.__setattr__(self, "seed", parse(self.seed).canonical)


@dataclass(frozen=True)
class Scientist:
    id: str
    display_name: str
    publication_ids: tuple[str, ...]
    # canonical SMILES -> multiplicity in the scientist's record
    molecules: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class ExpertiseProfile:
    scientist_id: str
    mode: str
    publications: tuple[tuple[str, str], ...] = ()  # (title, abstract)
    molecules: tuple[str, ...] = ()  # canonical SMILES
    role: str = ""
    keywords: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.mode not in PROFILE_MODES:
            raise ValueError(f"unknown profile mode {self.mode!r}")
        if self.mode == "vanilla" and (
            self.publications or self.molecules or self.role or self.keywords
        ):
            raise ValueError("vanilla profiles must be empty")
        if self.role and self.mode != "role":
            raise ValueError("role text only belongs to role mode")
        if self.keywords and self.mode != "keyword":
            raise ValueError("keywords only belong to keyword mode")

    def to_dict(self) -> dict:
        return {
            "scientist_id": self.scientist_id,
            "mode": self.mode,
            "publications": [
                {"title": title, "abstract": abstract}
                for title, abstract in self.publications
            ],
            "molecules": list(self.molecules),
            "role": self.role,
            "keywords": list(self.keywords),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)


@dataclass(frozen=True)
class ProfileLimits:
    max_pubs: int = 5
    max_mols: int = 10
    keyword_count: int = 10
    context_budget: int = 40000  # chars, massive_single truncation
    retrieval_top_m: int = 30


def select_scientists(
    index: CorpusIndex, task: TaskSpec, n: int, top_m: int = 30
) -> list[Scientist]:
    """First and last authors of the task-relevant literature, in retrieval
    rank order, deduplicated, widened until ``n`` are found or the corpus
    is exhausted."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if len(index) == 0:
        raise ProfileError("cannot select scientists from an empty corpus")
    limit = max(1, top_m)
    ordered: list[str] = []
    while True:
        results = retrieve(index, task.description, top_m=limit)
        ordered = []
        seen = set()
        for doc_id, _ in results:
            authors = index.publications[doc_id].authors
            for author in (authors[0], authors[-1]):
                if author not in seen:
                    seen.add(author)
                    ordered.append(author)
        if len(ordered) >= n or len(results) < limit or limit >= len(index):
            break
        limit = min(limit * 2, len(index))
    return [_scientist(index, author) for author in ordered[:n]]


def _scientist(index: CorpusIndex, author: str) -> Scientist:
    molecules = tuple(
        sorted(
            ((canonical, count) for canonical, (_, count) in index.molecules_for(author).items())
        )
    )
    return Scientist(
        id=author,
        display_name=author,
        publication_ids=tuple(index.by_author.get(author, ())),
        molecules=molecules,
    )


def _ranked_publications(
    index: CorpusIndex, scientist: Scientist, task: TaskSpec, max_pubs: int
) -> tuple[tuple[str, str], ...]:
    if not scientist.publication_ids:
        return ()
    counts = keyword_frequency(index, list(scientist.publication_ids), list(task.keywords))
    ranked = sorted(
        scientist.publication_ids,
        key=lambda pub_id: (
            -counts[pub_id],
            -index.publications[pub_id].year,
            pub_id,
        ),
    )
    return tuple(
        (index.publications[pub_id].title, index.publications[pub_id].abstract)
        for pub_id in ranked[:max_pubs]
    )


def _ranked_molecules(
    scientist: Scientist, task: TaskSpec, max_mols: int
) -> tuple[str, ...]:
    if not scientist.molecules:
        return ()
    if task.seed is not None:
        seed_fp = morgan_fingerprint(parse(task.seed))
        ranked = sorted(
            scientist.molecules,
            key=lambda item: (
                -tanimoto(morgan_fingerprint(parse(item[0])), seed_fp),
                item[0],
            ),
        )
    else:
        ranked = sorted(scientist.molecules, key=lambda item: (-item[1], item[0]))
    return tuple(canonical for canonical, _ in ranked[:max_mols])


def _extract_keywords(
    publications: tuple[tuple[str, str], ...], count: int
) -> tuple[str, ...]:
    tokens: Counter[str] = Counter()
    for title, abstract in publications:
        for token in tokenize(f"{title} {abstract}"):
            if token not in STOPWORDS and not token.isdigit():
                tokens[token] += 1
    ranked = sorted(tokens.items(), key=lambda item: (-item[1], item[0]))
    return tuple(token for token, _ in ranked[:count])


def _complete(backend: Backend, agent_id: str, phase: str, system: str, prompt: str) -> str:
    request = ChatRequest(
        messages=(("system", system), ("user", prompt)),
        tag=RequestTag(agent=agent_id, round=0, phase=phase),
    )
    return backend.complete(request)


def _llm_generated_profile(
    scientist: Scientist, task: TaskSpec, limits: ProfileLimits, backend: Backend
) -> ExpertiseProfile:
    system = "You fabricate plausible scientist profiles for a simulation."
    pub_prompt = render(
        load_template("llm_profile_pub"),
        {
            "scientist_name": scientist.display_name,
            "task_description": task.description,
            "max_pubs": limits.max_pubs,
        },
    )
    mol_prompt = render(
        load_template("llm_profile_mol"),
        {
            "scientist_name": scientist.display_name,
            "task_description": task.description,
            "max_mols": limits.max_mols,
        },
    )
    pub_reply = _complete(backend, scientist.id, "llm_profile_pub", system, pub_prompt)
    mol_reply = _complete(backend, scientist.id, "llm_profile_mol", system, mol_prompt)
    publications = []
    for blob in _json_blobs(pub_reply):
        try:
            data = json.loads(blob)
        except json.JSONDecodeError:
            continue
        if isinstance(data, list):
            for item in data:
                if isinstance(item, dict) and "title" in item:
                    publications.append(
                        (str(item["title"]), str(item.get("abstract", "")))
                    )
            break
    molecules = []
    for blob in _json_blobs(mol_reply):
        try:
            data = json.loads(blob)
        except json.JSONDecodeError:
            continue
        if isinstance(data, list):
            for item in data:
                if not isinstance(item, str):
                    continue
                try:
                    with warnings.catch_warnings():
                        warnings.simplefilter("ignore")
                        molecules.append(parse(item).canonical)
                except Exception:
                    continue  # hallucinated SMILES are dropped
            break
    return ExpertiseProfile(
        scientist_id=scientist.id,
        mode="llm_generated",
        publications=tuple(publications[: limits.max_pubs]),
        molecules=tuple(dict.fromkeys(molecules))[: limits.max_mols],
    )


def build_profile(
    index: CorpusIndex,
    scientist: Scientist,
    task: TaskSpec,
    mode: str,
    limits: ProfileLimits = ProfileLimits(),
    backend: Backend | None = None,
) -> ExpertiseProfile:
    """Build one scientist's profile in a roster-independent mode.

    ``single``, ``massive_single``, and ``random`` need the whole selected
    roster; use :func:`build_profiles` for those.
    """
    if mode not in PROFILE_MODES:
        raise ProfileError(f"unknown profile mode {mode!r}")
    if mode == "vanilla":
        return ExpertiseProfile(scientist_id=scientist.id, mode="vanilla")
    if mode == "full":
        return ExpertiseProfile(
            scientist_id=scientist.id,
            mode="full",
            publications=_ranked_publications(index, scientist, task, limits.max_pubs),
            molecules=_ranked_molecules(scientist, task, limits.max_mols),
        )
    if mode == "keyword":
        publications = _ranked_publications(index, scientist, task, limits.max_pubs)
        return ExpertiseProfile(
            scientist_id=scientist.id,
            mode="keyword",
            keywords=_extract_keywords(publications, limits.keyword_count),
        )
    if mode == "role":
        if backend is None:
            raise ProfileError("role mode needs a backend")
        prompt = render(
            load_template("role_generation"), {"task_description": task.description}
        )
        role = _complete(
            backend,
            scientist.id,
            "role_generation",
            "You define professional roles for collaborators.",
            prompt,
        ).strip()
        return ExpertiseProfile(scientist_id=scientist.id, mode="role", role=role)
    if mode == "llm_generated":
        if backend is None:
            raise ProfileError("llm_generated mode needs a backend")
        return _llm_generated_profile(scientist, task, limits, backend)
    raise ProfileError(f"mode {mode!r} needs the full roster; use build_profiles")


def _massive_union(
    index: CorpusIndex,
    scientists: list[Scientist],
    task: TaskSpec,
    limits: ProfileLimits,
) -> tuple[tuple[tuple[str, str], ...], tuple[str, ...]]:
    top_half = scientists[: max(1, (len(scientists) + 1) // 2)]
    fulls = [
        build_profile(index, scientist, task, "full", limits)
        for scientist in top_half
    ]
    budget = limits.context_budget
    publications: list[tuple[str, str]] = []
    seen_pub = set()
    for profile in fulls:
        for entry in profile.publications:
            if entry in seen_pub:
                continue
            cost = len(entry[0]) + len(entry[1])
            if budget - cost < 0:
                break
            seen_pub.add(entry)
            publications.append(entry)
            budget -= cost
    molecules: list[str] = []
    seen_mol = set()
    for profile in fulls:
        for canonical in profile.molecules:
            if canonical in seen_mol:
                continue
            if budget - len(canonical) < 0:
                break
            seen_mol.add(canonical)
            molecules.append(canonical)
            budget -= len(canonical)
    return tuple(publications), tuple(molecules)


def build_profiles(
    index: CorpusIndex,
    scientists: list[Scientist],
    task: TaskSpec,
    mode: str,
    limits: ProfileLimits = ProfileLimits(),
    backend: Backend | None = None,
    rng_seed: int = 0,
) -> list[ExpertiseProfile]:
    """Profiles for the whole selected roster (relevance order), any mode."""
    if mode not in PROFILE_MODES:
        raise ProfileError(f"unknown profile mode {mode!r}")
    if not scientists:
        raise ProfileError("no scientists selected")
    if mode == "single":
        base = build_profile(index, scientists[0], task, "full", limits)
        return [
            replace(base, mode="single", scientist_id=scientist.id)
            for scientist in scientists
        ]
    if mode == "massive_single":
        publications, molecules = _massive_union(index, scientists, task, limits)
        return [
            ExpertiseProfile(
                scientist_id=scientist.id,
                mode="massive_single",
                publications=publications,
                molecules=molecules,
            )
            for scientist in scientists
        ]
    if mode == "random":
        half = len(scientists) // 2
        bottom = scientists[half:] if half else scientists
        profiles = []
        for scientist in scientists:
            candidates = [s for s in bottom if s.id != scientist.id] or list(bottom)
            rng = random.Random(f"{rng_seed}:{scientist.id}")
            donor = candidates[rng.randrange(len(candidates))]
            base = build_profile(index, donor, task, "full", limits)
            profiles.append(
                replace(base, mode="random", scientist_id=scientist.id)
            )
        return profiles
    return [
        build_profile(index, scientist, task, mode, limits, backend=backend)
        for scientist in scientists
    ]
