"""Corpus loading and (source, year) partitioning.

The corpus file is UTF-8 JSON lines, one object per line with exactly
the keys `id`, `source`, `year`, `text`. Unknown keys are ignored with
a warning; malformed records are skipped with a logged line number;
duplicate ids abort the load.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DataError

log = logging.getLogger(__name__)

DEFAULT_YEAR_RANGE = (2008, 2018)

_REQUIRED_KEYS = ("id", "source", "year", "text")


@dataclass
class Document:
    """One article: identity, partition cell, raw text, processed tokens."""

    id: str
    source: str
    year: int
    text: str
    tokens: list[int] | None = None


@dataclass
class Corpus:
    documents: list[Document]
    partition_index: dict[tuple[str, int], list[int]] = field(default_factory=dict)
    doc_counts: dict[tuple[str, int], int] = field(default_factory=dict)

    @classmethod
    def build(cls, documents: list[Document]) -> "Corpus":
        index: dict[tuple[str, int], list[int]] = {}
        for pos, doc in enumerate(documents):
            index.setdefault((doc.source, doc.year), []).append(pos)
        counts = {cell: len(rows) for cell, rows in index.items()}
        return cls(documents, index, counts)

    @property
    def sources(self) -> list[str]:
        return sorted({doc.source for doc in self.documents})

    @property
    def years(self) -> list[int]:
        return sorted({doc.year for doc in self.documents})

    def __len__(self) -> int:
        return len(self.documents)


def load_corpus(
    path: str | Path,
    year_range: tuple[int, int] = DEFAULT_YEAR_RANGE,
) -> Corpus:
    """Load and validate a JSON-lines corpus file.

    Records with a year outside `year_range` (inclusive) are rejected
    with a warning. A duplicate id or a corpus with zero valid records
    raises DataError.
    """
    lo, hi = year_range
    if lo > hi:
        raise DataError(f"invalid year range: {year_range}")
    documents: list[Document] = []
    seen_ids: set[str] = set()
    n_bad = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                log.error("%s:%d: invalid JSON (%s); record skipped", path, lineno, exc)
                n_bad += 1
                continue
            if not isinstance(record, dict):
                log.error("%s:%d: record is not an object; skipped", path, lineno)
                n_bad += 1
                continue
            missing = [k for k in _REQUIRED_KEYS if k not in record]
            if missing:
                log.error(
                    "%s:%d: missing keys %s; record skipped", path, lineno, missing
                )
                n_bad += 1
                continue
            unknown = sorted(set(record) - set(_REQUIRED_KEYS))
            if unknown:
                log.warning("%s:%d: ignoring unknown keys %s", path, lineno, unknown)
            doc_id, source, year, text = (
                record["id"],
                record["source"],
                record["year"],
                record["text"],
            )
            if (
                not isinstance(doc_id, str)
                or not isinstance(source, str)
                or not isinstance(text, str)
                or isinstance(year, bool)
                or not isinstance(year, int)
            ):
                log.error("%s:%d: field with wrong type; record skipped", path, lineno)
                n_bad += 1
                continue
            if not text.strip():
                log.error("%s:%d: empty text; record skipped", path, lineno)
                n_bad += 1
                continue
            if doc_id in seen_ids:
                raise DataError(f"{path}:{lineno}: duplicate document id {doc_id!r}")
            if not lo <= year <= hi:
                log.warning(
                    "%s:%d: year %d outside range %d-%d; record rejected",
                    path, lineno, year, lo, hi,
                )
                continue
            seen_ids.add(doc_id)
            documents.append(Document(doc_id, source, year, text))
    if not documents:
        raise DataError(f"{path}: no valid documents loaded ({n_bad} malformed)")
    if n_bad:
        log.warning("%s: skipped %d malformed records", path, n_bad)
    return Corpus.build(documents)


def partition(corpus: Corpus, source: str, year: int) -> list[Document]:
    """Documents of one (source, year) cell in stable input order."""
    rows = corpus.partition_index.get((source, year), [])
    return [corpus.documents[i] for i in rows]
