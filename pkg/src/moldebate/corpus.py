"""Publication/molecule corpus with lexical retrieval.

Corpora are offline JSONL files.  Retrieval is BM25 (k1 = 1.2, b = 0.75,
idf = ln(1 + (N - df + 0.5) / (df + 0.5))) over lowercased title+abstract
text tokenized by splitting on non-alphanumeric characters; no stemming, no
stopwords.  The index is immutable after ingestion and safe for concurrent
reads.
"""

from __future__ import annotations

import hashlib
import json
import math
import warnings
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .chem import parse
from .errors import CorpusError, RetrievalError

__all__ = [
    "Publication",
    "MoleculeRecord",
    "CorpusIndex",
    "IngestReport",
    "ingest",
    "retrieve",
    "keyword_frequency",
    "tokenize",
]

BM25_K1 = 1.2
BM25_B = 0.75


def tokenize(text: str) -> list[str]:
    """Unicode-lowercase, split on non-alphanumerics."""
    return "".join(c if c.isalnum() else " " for c in text.lower()).split()


@dataclass(frozen=True)
class Publication:
    id: str
    title: str
    abstract: str
    authors: tuple[str, ...]
    year: int

    def __post_init__(self) -> None:
        if not self.authors:
            raise ValueError(f"publication {self.id!r} has no authors")

    @property
    def text(self) -> str:
        return f"{self.title} {self.abstract}"


@dataclass(frozen=True)
class MoleculeRecord:
    smiles: str  # canonical form
    scientist_ids: tuple[str, ...]
    source_publication: str | None = None


@dataclass
class IngestReport:
    publications_accepted: int = 0
    molecules_accepted: int = 0
    molecules_rejected: int = 0
    rejections: list[str] = field(default_factory=list)


class CorpusIndex:
    """Inverted index over publications plus a per-scientist molecule store."""

    def __init__(self, publications: list[Publication]):
        self.publications: dict[str, Publication] = {}
        for pub in publications:
            if pub.id in self.publications:
                raise CorpusError(f"duplicate publication id {pub.id!r}")
            self.publications[pub.id] = pub
        self._doc_ids = sorted(self.publications)
        self._term_freqs: dict[str, Counter[str]] = {}
        self._doc_lengths: dict[str, int] = {}
        self._postings: dict[str, list[tuple[str, int]]] = {}
        for doc_id in self._doc_ids:
            tokens = tokenize(self.publications[doc_id].text)
            freqs = Counter(tokens)
            self._term_freqs[doc_id] = freqs
            self._doc_lengths[doc_id] = len(tokens)
            for term, tf in freqs.items():
                self._postings.setdefault(term, []).append((doc_id, tf))
        total = sum(self._doc_lengths.values())
        self.average_doc_length = total / len(self._doc_ids) if self._doc_ids else 0.0
        # scientist id -> canonical SMILES -> (record, multiplicity)
        self.molecules: dict[str, dict[str, tuple[MoleculeRecord, int]]] = {}
        # scientist id -> publication ids, in corpus order
        self.by_author: dict[str, list[str]] = {}
        for doc_id in self._doc_ids:
            for author in self.publications[doc_id].authors:
                bucket = self.by_author.setdefault(author, [])
                if doc_id not in bucket:
                    bucket.append(doc_id)

    def __len__(self) -> int:
        return len(self.publications)

    def add_molecule(self, record: MoleculeRecord) -> None:
        for scientist in record.scientist_ids:
            store = self.molecules.setdefault(scientist, {})
            if record.smiles in store:
                existing, count = store[record.smiles]
                store[record.smiles] = (existing, count + 1)
            else:
                store[record.smiles] = (record, 1)

    def molecules_for(self, scientist_id: str) -> dict[str, tuple[MoleculeRecord, int]]:
        return self.molecules.get(scientist_id, {})

    def idf(self, term: str) -> float:
        df = len(self._postings.get(term, ()))
        n = len(self._doc_ids)
        return math.log(1.0 + (n - df + 0.5) / (df + 0.5))

    def score(self, query_tokens: list[str], doc_id: str) -> float:
        freqs = self._term_freqs[doc_id]
        length_norm = BM25_K1 * (
            1.0 - BM25_B + BM25_B * self._doc_lengths[doc_id] / self.average_doc_length
        )
        total = 0.0
        for term in query_tokens:
            tf = freqs.get(term, 0)
            if tf == 0:
                continue
            total += self.idf(term) * tf * (BM25_K1 + 1.0) / (tf + length_norm)
        return total


def _read_jsonl(path: Path) -> list[tuple[int, dict]]:
    rows = []
    with open(path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path.name}:{line_number}: malformed JSON ({exc.msg})")
            if not isinstance(row, dict):
                raise CorpusError(f"{path.name}:{line_number}: expected a JSON object")
            rows.append((line_number, row))
    return rows


def ingest(
    publications_file: str | Path, molecules_file: str | Path | None = None
) -> tuple[CorpusIndex, IngestReport]:
    """Build a :class:`CorpusIndex` from JSONL files.

    Molecules whose SMILES do not parse are rejected with per-line
    diagnostics in the report; malformed JSON and duplicate publication ids
    abort with a :class:`~moldebate.errors.CorpusError` naming the line.
    """
    publications_file = Path(publications_file)
    publications = []
    for line_number, row in _read_jsonl(publications_file):
        try:
            publications.append(
                Publication(
                    id=str(row["id"]),
                    title=str(row["title"]),
                    abstract=str(row["abstract"]),
                    authors=tuple(str(a) for a in row["authors"]),
                    year=int(row["year"]),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CorpusError(
                f"{publications_file.name}:{line_number}: bad publication record ({exc})"
            )
    index = CorpusIndex(publications)
    report = IngestReport(publications_accepted=len(publications))

    if molecules_file is not None:
        molecules_file = Path(molecules_file)
        for line_number, row in _read_jsonl(molecules_file):
            try:
                smiles = str(row["smiles"])
                scientists = tuple(str(s) for s in row["scientist_ids"])
                source = row.get("source_publication")
            except (KeyError, TypeError) as exc:
                raise CorpusError(
                    f"{molecules_file.name}:{line_number}: bad molecule record ({exc})"
                )
            if not scientists:
                raise CorpusError(
                    f"{molecules_file.name}:{line_number}: empty scientist_ids"
                )
            try:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    canonical = parse(smiles).canonical
            except Exception as exc:
                report.molecules_rejected += 1
                report.rejections.append(
                    f"{molecules_file.name}:{line_number}: unparseable SMILES "
                    f"{smiles!r} ({exc})"
                )
                continue
            index.add_molecule(
                MoleculeRecord(
                    smiles=canonical,
                    scientist_ids=scientists,
                    source_publication=str(source) if source is not None else None,
                )
            )
            report.molecules_accepted += 1
    return index, report


def retrieve(index: CorpusIndex, query: str, top_m: int) -> list[tuple[str, float]]:
    """BM25-ranked (publication id, score) with positive scores only.

    Ties break by publication id so rankings are stable.
    """
    if top_m < 1:
        raise ValueError("top_m must be >= 1")
    tokens = tokenize(query)
    if not tokens:
        raise RetrievalError("query is empty after tokenization")
    scored = []
    for doc_id in index.publications:
        score = index.score(tokens, doc_id)
        if score > 0.0:
            scored.append((doc_id, score))
    scored.sort(key=lambda item: (-item[1], item[0]))
    return scored[:top_m]


def keyword_frequency(
    index: CorpusIndex, publication_ids: list[str], keywords: list[str]
) -> dict[str, int]:
    """Total occurrences of the keyword tokens in each publication's text.

    Multi-word keywords are flattened to tokens with the retrieval
    tokenizer, so counts are additive over disjoint keyword sets.
    """
    if not keywords:
        raise ValueError("keywords must be non-empty")
    keyword_tokens = [token for keyword in keywords for token in tokenize(keyword)]
    counts = {}
    for pub_id in publication_ids:
        if pub_id not in index.publications:
            raise CorpusError(f"unknown publication id {pub_id!r}")
        freqs = index._term_freqs[pub_id]
        counts[pub_id] = sum(freqs.get(token, 0) for token in keyword_tokens)
    return counts


def corpus_fingerprint(*paths: str | Path) -> str:
    """SHA-256 over the raw bytes of the corpus files, for run records."""
    digest = hashlib.sha256()
    for path in paths:
        digest.update(Path(path).read_bytes())
    return digest.hexdigest()
