"""Per-(source, year) topic prevalence, word-list frequencies and
between-source significance testing.

Topic prevalence for a cell is the arithmetic mean of the fitted
document-topic probabilities over that cell's documents. Word-list
frequency is occurrences of list words divided by total tokens in the
cell, computed on surface tokens (no stemming). Per-year differences
between the two sources are tested with a two-sided Fisher exact test.
"""

from __future__ import annotations

import json
import logging
import math
import operator
from dataclasses import dataclass
from pathlib import Path

from .corpus import Corpus
from .errors import DataError
from .lda import TopicModel
from .textprep import FilterLists, TokenizerRules, normalize_word, tokenize

log = logging.getLogger(__name__)

DEFAULT_WORDLISTS_PATH = Path(__file__).parent / "data" / "wordlists_default.json"


@dataclass(frozen=True)
class TopicPrevalencePoint:
    source: str
    year: int
    topic: int
    value: float
    n_docs: int


@dataclass(frozen=True)
class WordList:
    """A pre-registered named list of surface words."""

    label: str
    words: frozenset[str]
    provenance: str | None = None


@dataclass(frozen=True)
class FrequencyPoint:
    source: str
    year: int
    list_label: str
    hits: int
    total: int

    @property
    def value(self) -> float:
        return self.hits / self.total


@dataclass(frozen=True)
class SignificanceResult:
    year: int
    list_label: str
    table: tuple[int, int, int, int]  # (hits_a, miss_a, hits_b, miss_b)
    p_value: float
    significant: bool


def topic_prevalence(
    model: TopicModel,
    corpus: Corpus,
    topic: int,
    include_empty_docs: bool = False,
) -> list[TopicPrevalencePoint]:
    """Mean document-topic probability per (source, year) cell.

    Documents that were empty after preprocessing carry a uniform theta
    row; by default they are excluded from the cell means. Cells left
    with no contributing document are omitted with a warning.
    """
    if not 0 <= topic < model.K:
        raise ValueError(f"topic {topic} out of range [0, {model.K})")
    row_of = {doc_id: i for i, doc_id in enumerate(model.doc_ids)}
    points = []
    for source, year in sorted(corpus.partition_index):
        rows = []
        for pos in corpus.partition_index[(source, year)]:
            doc = corpus.documents[pos]
            i = row_of.get(doc.id)
            if i is None:
                raise DataError(f"document {doc.id!r} missing from model")
            if model.empty_docs[i] and not include_empty_docs:
                continue
            rows.append(i)
        if not rows:
            log.warning(
                "cell (%s, %d) has no contributing documents; omitted", source, year
            )
            continue
        mean = float(model.theta[rows, topic].mean())
        points.append(TopicPrevalencePoint(source, year, topic, mean, len(rows)))
    return points


def word_frequency(
    corpus: Corpus,
    word_list: WordList,
    rules: TokenizerRules = TokenizerRules(),
    filters: FilterLists = FilterLists(),
    denominator: str = "filtered",
) -> list[FrequencyPoint]:
    """Word-list hit rate per (source, year) cell, on surface tokens.

    `denominator` selects what counts as the cell total: "filtered"
    (tokens surviving the stopword/exclusion filters; hits are counted
    on the same stream) or "raw" (all tokens, with hits still counted
    after filtering).
    """
    if denominator not in ("filtered", "raw"):
        raise ValueError(f"unknown denominator mode: {denominator!r}")
    drop = filters.all_filtered
    words = word_list.words
    hits: dict[tuple[str, int], int] = {}
    totals: dict[tuple[str, int], int] = {}
    for doc in corpus.documents:
        cell = (doc.source, doc.year)
        tokens = tokenize(doc.text, rules)
        kept = [t for t in tokens if t not in drop] if drop else tokens
        totals[cell] = totals.get(cell, 0) + (
            len(kept) if denominator == "filtered" else len(tokens)
        )
        hits[cell] = hits.get(cell, 0) + sum(1 for t in kept if t in words)
    points = []
    for cell in sorted(totals):
        if totals[cell] == 0:
            log.warning("cell %s has no tokens; point omitted", cell)
            continue
        points.append(
            FrequencyPoint(cell[0], cell[1], word_list.label, hits[cell], totals[cell])
        )
    return points


def word_frequency_from_streams(
    docs: list[tuple[str, int, list[str]]],
    word_list: WordList,
    raw_totals: list[int] | None = None,
) -> list[FrequencyPoint]:
    """Like word_frequency, but over already-filtered surface-token streams.

    `docs` holds (source, year, tokens) triples. If `raw_totals` is
    given (pre-filter token counts, aligned with `docs`), cell totals
    use those instead of the filtered stream lengths.
    """
    if raw_totals is not None and len(raw_totals) != len(docs):
        raise ValueError("raw_totals length does not match docs")
    words = word_list.words
    hits: dict[tuple[str, int], int] = {}
    totals: dict[tuple[str, int], int] = {}
    for i, (source, year, tokens) in enumerate(docs):
        cell = (source, year)
        totals[cell] = totals.get(cell, 0) + (
            raw_totals[i] if raw_totals is not None else len(tokens)
        )
        hits[cell] = hits.get(cell, 0) + sum(1 for t in tokens if t in words)
    points = []
    for cell in sorted(totals):
        if totals[cell] == 0:
            log.warning("cell %s has no tokens; point omitted", cell)
            continue
        points.append(
            FrequencyPoint(cell[0], cell[1], word_list.label, hits[cell], totals[cell])
        )
    return points


def _canonical_table(a: int, b: int, c: int, d: int) -> tuple[int, int, int, int]:
    """Canonical representative under row swap, column swap, transpose.

    Computing p on the canonical orientation makes the symmetry
    identities hold exactly, not just to rounding.
    """
    return min(
        (a, b, c, d), (c, d, a, b), (b, a, d, c), (d, c, b, a),
        (a, c, b, d), (b, d, a, c), (c, a, d, b), (d, b, c, a),
    )


_LOG_FACT = [0.0, 0.0]


def _log_factorials(n: int) -> list[float]:
    """Cache of log(k!) for k <= n."""
    while len(_LOG_FACT) <= n:
        k = len(_LOG_FACT)
        _LOG_FACT.append(_LOG_FACT[-1] + math.log(k))
    return _LOG_FACT


def fisher_exact_two_sided(a: int, b: int, c: int, d: int) -> float:
    """Two-sided Fisher exact p-value for the 2x2 table [[a, b], [c, d]].

    Sums hypergeometric probabilities (computed in log space) of every
    table with the same margins whose probability does not exceed the
    observed one by more than a factor of 1 + 1e-7; the slack absorbs
    rounding in ties. The all-zero table yields 1.0 by convention.
    """
    try:
        a, b, c, d = (operator.index(v) for v in (a, b, c, d))
    except TypeError as exc:
        raise ValueError(f"cell counts must be integers: {(a, b, c, d)}") from exc
    if min(a, b, c, d) < 0:
        raise ValueError(f"cell counts must be non-negative: {(a, b, c, d)}")
    n = a + b + c + d
    if n == 0:
        return 1.0
    a, b, c, d = _canonical_table(a, b, c, d)
    r1 = a + b
    r2 = c + d
    c1 = a + c
    lf = _log_factorials(n)
    base = lf[r1] + lf[r2] + lf[c1] + lf[n - c1] - lf[n]

    def log_prob(x: int) -> float:
        return base - lf[x] - lf[r1 - x] - lf[c1 - x] - lf[r2 - c1 + x]

    cutoff = log_prob(a) + math.log1p(1e-7)
    lo = max(0, c1 - r2)
    hi = min(r1, c1)
    p = 0.0
    for x in range(lo, hi + 1):
        lp = log_prob(x)
        if lp <= cutoff:
            p += math.exp(lp)
    return min(p, 1.0)


def compare_sources(
    freq_a: list[FrequencyPoint],
    freq_b: list[FrequencyPoint],
    alpha: float = 0.05,
) -> list[SignificanceResult]:
    """Per-year Fisher exact tests between two sources' frequency series.

    Years present in only one series are skipped with a warning. Both
    series must belong to the same word list and to distinct sources.
    """
    labels = {p.list_label for p in freq_a} | {p.list_label for p in freq_b}
    if len(labels) > 1:
        raise ValueError(f"series belong to different lists: {sorted(labels)}")
    sources_a = {p.source for p in freq_a}
    sources_b = {p.source for p in freq_b}
    if sources_a & sources_b:
        raise ValueError("the two series must come from distinct sources")
    by_year_a = {p.year: p for p in freq_a}
    by_year_b = {p.year: p for p in freq_b}
    results = []
    for year in sorted(set(by_year_a) | set(by_year_b)):
        if year not in by_year_a or year not in by_year_b:
            log.warning("year %d present in only one series; skipped", year)
            continue
        pa, pb = by_year_a[year], by_year_b[year]
        table = (pa.hits, pa.total - pa.hits, pb.hits, pb.total - pb.hits)
        p = fisher_exact_two_sided(*table)
        results.append(
            SignificanceResult(year, pa.list_label, table, p, p < alpha)
        )
    return results


def register_word_lists(
    manifest_path: str | Path = DEFAULT_WORDLISTS_PATH,
    rules: TokenizerRules = TokenizerRules(),
) -> list[WordList]:
    """Load and validate the pre-registered word lists.

    Analysis commands only accept lists that went through this loader;
    registering lists up front is the mechanical guard against ad-hoc
    multiple comparisons. The manifest is JSON: a list of objects with
    `label`, `words` and an optional `provenance` note.
    """
    path = Path(manifest_path)
    try:
        entries = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read word-list manifest {path}: {exc}") from exc
    if isinstance(entries, dict):
        entries = entries.get("lists")
    if not isinstance(entries, list):
        raise DataError(f"{path}: manifest must be a JSON array of lists")
    word_lists = []
    seen = set()
    for pos, entry in enumerate(entries):
        if not isinstance(entry, dict) or "label" not in entry or "words" not in entry:
            raise DataError(f"{path}: entry {pos} needs 'label' and 'words'")
        label = entry["label"]
        if label in seen:
            raise DataError(f"{path}: duplicate list label {label!r}")
        seen.add(label)
        words = frozenset(normalize_word(w, rules) for w in entry["words"])
        if not words:
            raise DataError(f"{path}: list {label!r} is empty")
        provenance = entry.get("provenance")
        if not provenance:
            log.warning("word list %r has no provenance note", label)
        word_lists.append(WordList(label, words, provenance))
    return word_lists
