"""Tokenization, filtering, stemming and vocabulary construction.

The pipeline is: normalize surface tokens (lowercase, strip acute
accents, letters only), drop stopwords and curated exclusions, then stem
for topic modeling. Word-frequency analysis reuses the same tokenizer
and filters but skips stemming, so both representations stay aligned.
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DataError
from .stemmer import stem

log = logging.getLogger(__name__)

_DEACCENT = str.maketrans("\xe1\xe9\xed\xf3\xfa", "aeiou")


def _letter_runs(text: str) -> list[str]:
    """Maximal runs of letters; digits, punctuation etc. split tokens."""
    return [
        "".join(run)
        for is_alpha, run in itertools.groupby(text, str.isalpha)
        if is_alpha
    ]

DATA_DIR = Path(__file__).parent / "data"
DEFAULT_STOPWORDS_PATH = DATA_DIR / "stopwords_es.txt"


@dataclass(frozen=True)
class TokenizerRules:
    """Normalization rules for surface tokens.

    Acute accents are stripped but n-tilde and u-diaeresis are kept, so
    "tecnología" -> "tecnologia" while "diseño" stays intact (and "años"
    does not collide with "anos").
    """

    lowercase: bool = True
    strip_acute_accents: bool = True
    min_token_length: int = 2


def tokenize(text: str, rules: TokenizerRules = TokenizerRules()) -> list[str]:
    """Split text into normalized surface tokens (letters only, in order)."""
    if rules.lowercase:
        text = text.lower()
    tokens = _letter_runs(text)
    if rules.strip_acute_accents:
        tokens = [t.translate(_DEACCENT) for t in tokens]
    if rules.min_token_length > 1:
        tokens = [t for t in tokens if len(t) >= rules.min_token_length]
    return tokens


def normalize_word(word: str, rules: TokenizerRules = TokenizerRules()) -> str:
    """Normalize a single list entry the same way tokenize() would."""
    if rules.lowercase:
        word = word.lower()
    if rules.strip_acute_accents:
        word = word.translate(_DEACCENT)
    return word


def load_word_file(path: str | Path) -> list[str]:
    """Read a one-word-per-line UTF-8 file; '#' starts a comment line."""
    words = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            words.append(line)
    return words


@dataclass(frozen=True)
class FilterLists:
    """Token sets removed before any counting.

    `curated_exclusions` plays the role of a hand-reviewed high-frequency
    list without analytic content; `source_specific_exclusions` holds
    magazine names and derived neologisms. The three sets are kept
    disjoint: entries already present in an earlier set are dropped with
    a warning.
    """

    stopwords: frozenset[str] = frozenset()
    curated_exclusions: frozenset[str] = frozenset()
    source_specific_exclusions: frozenset[str] = frozenset()

    @classmethod
    def from_words(
        cls,
        stopwords=(),
        curated_exclusions=(),
        source_specific_exclusions=(),
        rules: TokenizerRules = TokenizerRules(),
    ) -> "FilterLists":
        stop = frozenset(normalize_word(w, rules) for w in stopwords)
        curated = frozenset(normalize_word(w, rules) for w in curated_exclusions)
        overlap = curated & stop
        if overlap:
            log.warning(
                "%d curated exclusions already in stopwords; dropped", len(overlap)
            )
            curated -= stop
        specific = frozenset(
            normalize_word(w, rules) for w in source_specific_exclusions
        )
        overlap = specific & (stop | curated)
        if overlap:
            log.warning(
                "%d source-specific exclusions already filtered; dropped",
                len(overlap),
            )
            specific -= stop | curated
        return cls(stop, curated, specific)

    @classmethod
    def from_files(
        cls,
        stopwords_path: str | Path | None = DEFAULT_STOPWORDS_PATH,
        curated_path: str | Path | None = None,
        source_specific_path: str | Path | None = None,
        rules: TokenizerRules = TokenizerRules(),
    ) -> "FilterLists":
        return cls.from_words(
            load_word_file(stopwords_path) if stopwords_path else (),
            load_word_file(curated_path) if curated_path else (),
            load_word_file(source_specific_path) if source_specific_path else (),
            rules,
        )

    @property
    def all_filtered(self) -> frozenset[str]:
        return self.stopwords | self.curated_exclusions | self.source_specific_exclusions


def apply_filters(tokens: list[str], lists: FilterLists) -> list[str]:
    """Drop filtered tokens, preserving order of the survivors."""
    drop = lists.all_filtered
    if not drop:
        return list(tokens)
    return [t for t in tokens if t not in drop]


@dataclass
class Vocabulary:
    """Stem vocabulary with dense integer ids and a de-stemming map."""

    id_to_term: list[str]
    term_to_id: dict[str, int]
    destem_map: dict[str, str]
    doc_freq: dict[int, int] = field(default_factory=dict)

    @property
    def V(self) -> int:
        return len(self.id_to_term)

    def destem(self, term: str) -> str:
        """Most frequent surface form observed for a stem."""
        return self.destem_map.get(term, term)

    def destem_id(self, term_id: int) -> str:
        return self.destem(self.id_to_term[term_id])


def preprocess_document(
    text: str, rules: TokenizerRules, lists: FilterLists
) -> tuple[list[str], list[str]]:
    """Return (filtered surface tokens, their stems) for one document."""
    surface = apply_filters(tokenize(text, rules), lists)
    return surface, [stem(t) for t in surface]


def build_vocabulary(
    corpus,
    rules: TokenizerRules = TokenizerRules(),
    lists: FilterLists = FilterLists(),
    min_count: int = 1,
) -> Vocabulary:
    """Build the stem vocabulary and fill each Document.tokens with stem ids.

    Stems with corpus frequency below `min_count` are dropped from both
    the vocabulary and the token streams. The de-stem map points each
    stem at its modal surface form (ties broken lexicographically).
    """
    term_freq: Counter[str] = Counter()
    surface_counts: dict[str, Counter[str]] = {}
    stem_streams: list[list[str]] = []
    for doc in corpus.documents:
        surface, stems = preprocess_document(doc.text, rules, lists)
        stem_streams.append(stems)
        term_freq.update(stems)
        for token, token_stem in zip(surface, stems):
            surface_counts.setdefault(token_stem, Counter())[token] += 1

    kept = [t for t in term_freq if term_freq[t] >= min_count]
    if not kept:
        raise DataError(
            f"empty vocabulary: no stem reaches min_count={min_count}"
        )

    # First-appearance order over the corpus keeps ids deterministic.
    term_to_id: dict[str, int] = {}
    keep = set(kept)
    for stems in stem_streams:
        for t in stems:
            if t in keep and t not in term_to_id:
                term_to_id[t] = len(term_to_id)
    id_to_term = [""] * len(term_to_id)
    for t, i in term_to_id.items():
        id_to_term[i] = t

    destem_map = {}
    for t in term_to_id:
        counts = surface_counts[t]
        top = max(counts.values())
        destem_map[t] = min(form for form, c in counts.items() if c == top)

    doc_freq: Counter[int] = Counter()
    for doc, stems in zip(corpus.documents, stem_streams):
        ids = [term_to_id[t] for t in stems if t in term_to_id]
        doc.tokens = ids
        doc_freq.update(set(ids))

    dropped = len(term_freq) - len(term_to_id)
    if dropped:
        log.info("dropped %d stems below min_count=%d", dropped, min_count)
    return Vocabulary(id_to_term, term_to_id, destem_map, dict(doc_freq))
