"""Latent Dirichlet Allocation fitted by collapsed Gibbs sampling.

Sequential sampling with an explicit seed is bit-reproducible. The
topic-word and document-topic estimates are averages of the smoothed
count estimators over post-burn-in samples taken every `sample_lag`
sweeps.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError
from .textprep import Vocabulary

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LdaConfig:
    seed: int
    K: int = 100
    alpha: float | None = None  # None -> 50/K
    beta: float = 0.01
    sweeps: int = 1000
    burn_in: int = 800
    sample_lag: int = 10

    def __post_init__(self):
        if self.K < 1:
            raise ValueError(f"K must be >= 1, got {self.K}")
        if self.alpha is not None and self.alpha <= 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if self.beta <= 0:
            raise ValueError(f"beta must be > 0, got {self.beta}")
        if not 0 <= self.burn_in < self.sweeps:
            raise ValueError(
                f"burn_in must satisfy 0 <= burn_in < sweeps, got "
                f"{self.burn_in} / {self.sweeps}"
            )
        if self.sample_lag < 1:
            raise ValueError(f"sample_lag must be >= 1, got {self.sample_lag}")

    @property
    def alpha_value(self) -> float:
        return 50.0 / self.K if self.alpha is None else self.alpha


@dataclass
class LdaState:
    """Mutable sampler state: assignments plus the three count tables."""

    docs: list[list[int]]
    z: list[list[int]]
    n_dk: list[list[int]]  # doc x topic
    n_kw: list[list[int]]  # topic x word
    n_k: list[int]
    n_d: list[int]
    n_terms: int

    @property
    def total_tokens(self) -> int:
        return sum(self.n_d)


def init_state(
    token_streams: list[list[int]],
    config: LdaConfig,
    rng: random.Random,
    n_terms: int,
) -> LdaState:
    """Assign every token a uniform random topic and build the counts."""
    K = config.K
    docs = [list(doc) for doc in token_streams]
    z = []
    n_dk = []
    n_kw = [[0] * n_terms for _ in range(K)]
    n_k = [0] * K
    n_d = []
    randrange = rng.randrange
    for doc in docs:
        z_d = [randrange(K) for _ in doc]
        counts = [0] * K
        for w, k in zip(doc, z_d):
            counts[k] += 1
            n_kw[k][w] += 1
            n_k[k] += 1
        z.append(z_d)
        n_dk.append(counts)
        n_d.append(len(doc))
    return LdaState(docs, z, n_dk, n_kw, n_k, n_d, n_terms)


def gibbs_sweep(state: LdaState, config: LdaConfig, rng: random.Random) -> LdaState:
    """Resample every token's topic exactly once, in document order."""
    K = config.K
    alpha = config.alpha_value
    beta = config.beta
    v_beta = state.n_terms * beta
    n_kw = state.n_kw
    n_k = state.n_k
    rand = rng.random
    cumulative = [0.0] * K
    topics = range(K)
    for d, doc in enumerate(state.docs):
        z_d = state.z[d]
        n_dk_d = state.n_dk[d]
        for i, w in enumerate(doc):
            k = z_d[i]
            n_dk_d[k] -= 1
            n_kw[k][w] -= 1
            n_k[k] -= 1
            total = 0.0
            for k2 in topics:
                total += (
                    (n_dk_d[k2] + alpha)
                    * (n_kw[k2][w] + beta)
                    / (n_k[k2] + v_beta)
                )
                cumulative[k2] = total
            r = rand() * total
            k = 0
            while cumulative[k] < r and k < K - 1:
                k += 1
            z_d[i] = k
            n_dk_d[k] += 1
            n_kw[k][w] += 1
            n_k[k] += 1
    return state


def recount(state: LdaState) -> tuple[list[list[int]], list[list[int]], list[int]]:
    """Brute-force recomputation of (n_dk, n_kw, n_k) from the assignments."""
    K = len(state.n_k)
    n_dk = [[0] * K for _ in state.docs]
    n_kw = [[0] * state.n_terms for _ in range(K)]
    n_k = [0] * K
    for d, doc in enumerate(state.docs):
        for w, k in zip(doc, state.z[d]):
            n_dk[d][k] += 1
            n_kw[k][w] += 1
            n_k[k] += 1
    return n_dk, n_kw, n_k


def check_invariants(state: LdaState) -> None:
    """Assert the count-conservation invariants; raises AssertionError."""
    for d, counts in enumerate(state.n_dk):
        assert sum(counts) == state.n_d[d], f"doc {d}: topic counts != length"
    for k, row in enumerate(state.n_kw):
        assert sum(row) == state.n_k[k], f"topic {k}: word counts != total"
    assert sum(state.n_d) == sum(state.n_k), "token total drifted"


def log_likelihood(state: LdaState, config: LdaConfig) -> float:
    """Joint collapsed log-likelihood log p(w, z | alpha, beta)."""
    K = config.K
    V = state.n_terms
    alpha = config.alpha_value
    beta = config.beta
    lgamma = math.lgamma
    value = K * (lgamma(V * beta) - V * lgamma(beta))
    for k in range(K):
        value += sum(lgamma(c + beta) for c in state.n_kw[k])
        value -= lgamma(state.n_k[k] + V * beta)
    D = len(state.docs)
    value += D * (lgamma(K * alpha) - K * lgamma(alpha))
    for d in range(D):
        value += sum(lgamma(c + alpha) for c in state.n_dk[d])
        value -= lgamma(state.n_d[d] + K * alpha)
    return value


@dataclass
class TopicModel:
    """Fitted model: topic-word (phi) and document-topic (theta) estimates."""

    phi: np.ndarray  # K x V
    theta: np.ndarray  # D x K, aligned with doc_ids
    config: LdaConfig
    doc_ids: list[str]
    empty_docs: list[bool]
    vocabulary: Vocabulary | None = None
    n_samples: int = 0

    @property
    def K(self) -> int:
        return self.phi.shape[0]

    @property
    def V(self) -> int:
        return self.phi.shape[1]


def fit_lda(
    token_streams: list[list[int]],
    config: LdaConfig,
    n_terms: int | None = None,
    doc_ids: list[str] | None = None,
    vocabulary: Vocabulary | None = None,
    check_each_sweep: bool = False,
) -> TopicModel:
    """Fit LDA over per-document stem-id streams.

    Documents that are empty after preprocessing are excluded from the
    fit and receive a uniform theta row. Raises DataError if every
    document is empty.
    """
    if vocabulary is not None and n_terms is None:
        n_terms = vocabulary.V
    if n_terms is None:
        n_terms = 1 + max((max(doc) for doc in token_streams if doc), default=-1)
    if n_terms < 1:
        raise DataError("vocabulary is empty")
    if doc_ids is None:
        doc_ids = [str(i) for i in range(len(token_streams))]
    if len(doc_ids) != len(token_streams):
        raise ValueError("doc_ids length does not match token_streams")

    empty = [len(doc) == 0 for doc in token_streams]
    fitted_rows = [i for i, e in enumerate(empty) if not e]
    if not fitted_rows:
        raise DataError("all documents are empty after preprocessing")
    n_empty = len(token_streams) - len(fitted_rows)
    if n_empty:
        log.warning(
            "%d documents empty after preprocessing; excluded from fit", n_empty
        )
    streams = [token_streams[i] for i in fitted_rows]
    total_tokens = sum(len(doc) for doc in streams)
    if config.K > total_tokens:
        log.warning(
            "K=%d exceeds total token count %d; proceeding", config.K, total_tokens
        )

    rng = random.Random(config.seed)
    state = init_state(streams, config, rng, n_terms)

    K = config.K
    alpha = config.alpha_value
    beta = config.beta
    phi_acc = np.zeros((K, n_terms))
    theta_acc = np.zeros((len(streams), K))
    n_samples = 0
    for sweep in range(1, config.sweeps + 1):
        gibbs_sweep(state, config, rng)
        if check_each_sweep:
            check_invariants(state)
        if sweep > config.burn_in and (sweep - config.burn_in - 1) % config.sample_lag == 0:
            n_kw = np.asarray(state.n_kw, dtype=float)
            n_k = np.asarray(state.n_k, dtype=float)
            phi_acc += (n_kw + beta) / (n_k + n_terms * beta)[:, None]
            n_dk = np.asarray(state.n_dk, dtype=float)
            n_d = np.asarray(state.n_d, dtype=float)
            theta_acc += (n_dk + alpha) / (n_d + K * alpha)[:, None]
            n_samples += 1

    phi = phi_acc / n_samples
    theta = np.full((len(token_streams), K), 1.0 / K)
    theta[fitted_rows] = theta_acc / n_samples
    return TopicModel(
        phi=phi,
        theta=theta,
        config=config,
        doc_ids=list(doc_ids),
        empty_docs=empty,
        vocabulary=vocabulary,
        n_samples=n_samples,
    )


MODEL_SCHEMA_VERSION = 1


def save_model(model: TopicModel, path) -> None:
    """Write the fitted model as a single self-describing JSON file."""
    import json

    payload = {
        "schema_version": MODEL_SCHEMA_VERSION,
        "config": {
            "seed": model.config.seed,
            "K": model.config.K,
            "alpha": model.config.alpha,
            "beta": model.config.beta,
            "sweeps": model.config.sweeps,
            "burn_in": model.config.burn_in,
            "sample_lag": model.config.sample_lag,
        },
        "n_samples": model.n_samples,
        "doc_ids": model.doc_ids,
        "empty_docs": model.empty_docs,
        "vocabulary": None
        if model.vocabulary is None
        else {
            "terms": model.vocabulary.id_to_term,
            "destem": model.vocabulary.destem_map,
            "doc_freq": {str(k): v for k, v in sorted(model.vocabulary.doc_freq.items())},
        },
        "phi": model.phi.tolist(),
        "theta": model.theta.tolist(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False, separators=(",", ":"))


def load_model(path) -> TopicModel:
    import json

    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    version = payload.get("schema_version")
    if version != MODEL_SCHEMA_VERSION:
        raise DataError(f"unsupported model schema version: {version!r}")
    cfg = payload["config"]
    config = LdaConfig(
        seed=cfg["seed"],
        K=cfg["K"],
        alpha=cfg["alpha"],
        beta=cfg["beta"],
        sweeps=cfg["sweeps"],
        burn_in=cfg["burn_in"],
        sample_lag=cfg["sample_lag"],
    )
    vocab = None
    if payload["vocabulary"] is not None:
        terms = payload["vocabulary"]["terms"]
        vocab = Vocabulary(
            id_to_term=terms,
            term_to_id={t: i for i, t in enumerate(terms)},
            destem_map=payload["vocabulary"]["destem"],
            doc_freq={int(k): v for k, v in payload["vocabulary"]["doc_freq"].items()},
        )
    return TopicModel(
        phi=np.asarray(payload["phi"], dtype=float),
        theta=np.asarray(payload["theta"], dtype=float),
        config=config,
        doc_ids=payload["doc_ids"],
        empty_docs=payload["empty_docs"],
        vocabulary=vocab,
        n_samples=payload["n_samples"],
    )


def top_words(model: TopicModel, topic: int, n: int = 10) -> list[str]:
    """The n most probable words of a topic, de-stemmed, highest first.

    Ties are broken by ascending stem id so output is deterministic.
    """
    if not 0 <= topic < model.K:
        raise ValueError(f"topic {topic} out of range [0, {model.K})")
    if n > model.V:
        raise ValueError(f"n={n} exceeds vocabulary size {model.V}")
    row = model.phi[topic]
    order = sorted(range(model.V), key=lambda w: (-row[w], w))[:n]
    if model.vocabulary is None:
        return [str(w) for w in order]
    return [model.vocabulary.destem_id(w) for w in order]
