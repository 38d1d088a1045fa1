"""Synthetic corpora with planted topics, for validation studies.

Generated tokens are all-consonant strings, which the Spanish stemmer
leaves untouched, so planted word identities survive preprocessing and
recovered topics can be compared directly against the generator's
topic-word distributions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import linear_sum_assignment

_CONSONANTS = "bcdfghjklmnpqrstvwxz"


def consonant_tokens(count: int, prefix: str = "z") -> list[str]:
    """Deterministic list of distinct stemmer-inert tokens."""
    tokens = []
    base = len(_CONSONANTS)
    for i in range(count):
        suffix = []
        v = i
        for _ in range(3):
            suffix.append(_CONSONANTS[v % base])
            v //= base
        tokens.append(prefix + "".join(reversed(suffix)))
    return tokens


def sharp_topics(n_topics: int, words_per_topic: int) -> tuple[list[str], np.ndarray]:
    """Disjoint uniform topics: topic k owns its own block of words."""
    vocab = consonant_tokens(n_topics * words_per_topic)
    phi = np.zeros((n_topics, len(vocab)))
    for k in range(n_topics):
        phi[k, k * words_per_topic : (k + 1) * words_per_topic] = 1.0 / words_per_topic
    return vocab, phi


def planted_streams(
    seed: int,
    n_docs: int,
    doc_len: int,
    n_topics: int = 3,
    words_per_topic: int = 20,
    doc_alpha: float = 0.1,
) -> tuple[list[list[int]], np.ndarray]:
    """Token-id streams drawn from sharp planted topics.

    Returns (streams, true topic-word matrix); stream ids index the
    generator vocabulary directly.
    """
    rng = np.random.default_rng(seed)
    _, phi = sharp_topics(n_topics, words_per_topic)
    streams = []
    for _ in range(n_docs):
        theta = rng.dirichlet([doc_alpha] * n_topics)
        topics = rng.choice(n_topics, size=doc_len, p=theta)
        words = [
            int(rng.choice(phi.shape[1], p=phi[k]))
            for k in topics
        ]
        streams.append(words)
    return streams, phi


def match_topics(phi_recovered: np.ndarray, phi_true: np.ndarray) -> tuple[list[int], float]:
    """Hungarian assignment of recovered topics to true topics.

    Returns (assignment, mean cosine similarity); assignment[i] is the
    recovered-topic index matched to true topic i.
    """
    def normalize(m):
        return m / np.linalg.norm(m, axis=1, keepdims=True)

    cosine = normalize(phi_true) @ normalize(phi_recovered).T
    rows, cols = linear_sum_assignment(-cosine)
    assignment = [0] * phi_true.shape[0]
    total = 0.0
    for r, c in zip(rows, cols):
        assignment[r] = int(c)
        total += cosine[r, c]
    return assignment, total / phi_true.shape[0]


@dataclass
class GapStudyTruth:
    """Ground truth of a generated two-source gap-study corpus."""

    vocab: list[str]
    phi: np.ndarray  # planted topics over vocab
    gap_topic: int
    gap_by_year: dict[int, float]
    mixture: dict[tuple[str, int], np.ndarray]  # mean theta per cell
    list_words: list[str]
    list_rates: dict[str, float]


def gap_study_corpus(
    seed: int,
    sources: tuple[str, str] = ("alpha", "beta"),
    years: tuple[int, int] = (2008, 2018),
    docs_per_cell: int = 50,
    tokens_per_doc: int = 200,
    n_topics: int = 4,
    words_per_topic: int = 16,
    base_weight: float = 0.15,
    gap_start: float = 0.30,
    list_rates: tuple[float, float] = (0.03, 0.01),
    theta_concentration: float = 80.0,
) -> tuple[list[dict], GapStudyTruth]:
    """Two-source corpus where topic 0's prevalence gap closes linearly.

    Source `sources[0]` starts with `gap_start` extra weight on topic 0,
    decaying linearly to zero across the year range; a planted word list
    is injected with a constant rate ratio between the sources.

    Returns (JSONL-ready records, ground truth).
    """
    rng = np.random.default_rng(seed)
    vocab, phi = sharp_topics(n_topics, words_per_topic)
    list_words = consonant_tokens(3, prefix="q")
    year_lo, year_hi = years
    n_years = year_hi - year_lo
    records = []
    gap_by_year = {}
    mixture = {}
    rates = {sources[0]: list_rates[0], sources[1]: list_rates[1]}
    for year in range(year_lo, year_hi + 1):
        gap = gap_start * (year_hi - year) / n_years
        gap_by_year[year] = gap
        for source in sources:
            w0 = base_weight + (gap if source == sources[0] else 0.0)
            mix = np.full(n_topics, (1.0 - w0) / (n_topics - 1))
            mix[0] = w0
            mixture[(source, year)] = mix
            rate = rates[source]
            for d in range(docs_per_cell):
                theta = rng.dirichlet(theta_concentration * mix)
                topics = rng.choice(n_topics, size=tokens_per_doc, p=theta)
                words = []
                for k in topics:
                    if rng.random() < rate:
                        words.append(list_words[rng.integers(len(list_words))])
                    else:
                        block = rng.integers(words_per_topic)
                        words.append(vocab[k * words_per_topic + block])
                records.append(
                    {
                        "id": f"{source}-{year}-{d:04d}",
                        "source": source,
                        "year": year,
                        "text": " ".join(words),
                    }
                )
    truth = GapStudyTruth(
        vocab=vocab,
        phi=phi,
        gap_topic=0,
        gap_by_year=gap_by_year,
        mixture=mixture,
        list_words=list_words,
        list_rates=rates,
    )
    return records, truth


def write_jsonl(records: list[dict], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
