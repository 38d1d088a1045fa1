"""Diachronic two-source corpus comparison.

Fits a topic model over a corpus of year-labelled articles from two
sources, then contrasts the sources over time through topic prevalence
and curated word-list frequencies, with per-year exact significance
tests and LOESS-smoothed chart output.
"""

from .analysis import (
    FrequencyPoint,
    SignificanceResult,
    TopicPrevalencePoint,
    WordList,
    compare_sources,
    fisher_exact_two_sided,
    register_word_lists,
    topic_prevalence,
    word_frequency,
)
from .corpus import Corpus, Document, load_corpus, partition
from .errors import ConfigError, CorpusDiffError, DataError
from .lda import (
    LdaConfig,
    LdaState,
    TopicModel,
    fit_lda,
    gibbs_sweep,
    load_model,
    log_likelihood,
    save_model,
    top_words,
)
from .loess import SmoothConfig, SmoothedSeries, loess_fit
from .stemmer import stem
from .textprep import (
    FilterLists,
    TokenizerRules,
    Vocabulary,
    apply_filters,
    build_vocabulary,
    tokenize,
)

__all__ = [
    "ConfigError",
    "Corpus",
    "CorpusDiffError",
    "DataError",
    "Document",
    "FilterLists",
    "FrequencyPoint",
    "LdaConfig",
    "LdaState",
    "SignificanceResult",
    "SmoothConfig",
    "SmoothedSeries",
    "TokenizerRules",
    "TopicModel",
    "TopicPrevalencePoint",
    "Vocabulary",
    "WordList",
    "apply_filters",
    "build_vocabulary",
    "compare_sources",
    "fisher_exact_two_sided",
    "fit_lda",
    "gibbs_sweep",
    "load_corpus",
    "load_model",
    "loess_fit",
    "log_likelihood",
    "partition",
    "register_word_lists",
    "save_model",
    "stem",
    "tokenize",
    "top_words",
    "topic_prevalence",
    "word_frequency",
]

__version__ = "0.1.0"
