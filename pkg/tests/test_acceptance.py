"""Acceptance suite: one test per shipped guarantee.

Each test prints a PASS/FAIL line via the hook in conftest.py. The
heavyweight checks (exhaustive Fisher grid, synthetic end-to-end gap
study) carry explicit runtime ceilings.
"""

import csv
import json
import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from corpusdiff.analysis import (
    WordList,
    fisher_exact_two_sided,
    topic_prevalence,
    word_frequency,
)
from corpusdiff.cli import main as cli_main
from corpusdiff.corpus import Corpus, Document
from corpusdiff.lda import (
    LdaConfig,
    check_invariants,
    fit_lda,
    gibbs_sweep,
    init_state,
    load_model,
)
from corpusdiff.loess import SmoothConfig, loess_fit
from corpusdiff.stemmer import stem
from corpusdiff.synthetic import (
    gap_study_corpus,
    match_topics,
    planted_streams,
    write_jsonl,
)
from tests.test_loess import naive_loess_point
from tests.test_stemmer import REFERENCE


def test_criterion_1_gibbs_invariants():
    start = time.perf_counter()
    rng = random.Random(101)
    streams = [
        [rng.randrange(50) for _ in range(rng.randrange(5, 40))]
        for _ in range(200)
    ]
    config = LdaConfig(seed=11, K=5, sweeps=101, burn_in=100, sample_lag=1)
    sampler_rng = random.Random(config.seed)
    state = init_state(streams, config, sampler_rng, 50)
    total = state.total_tokens
    for _ in range(100):
        gibbs_sweep(state, config, sampler_rng)
        check_invariants(state)
        assert state.total_tokens == total
    assert time.perf_counter() - start < 10.0


def test_criterion_2_k1_collapse():
    rng = random.Random(102)
    streams = [
        [rng.randrange(20) for _ in range(rng.randrange(1, 30))]
        for _ in range(40)
    ]
    config = LdaConfig(seed=3, K=1, sweeps=6, burn_in=2, sample_lag=2)
    model = fit_lda(streams, config, n_terms=20)
    assert np.all(model.theta == 1.0)
    counts = np.zeros(20)
    for doc in streams:
        for w in doc:
            counts[w] += 1
    expected = (counts + config.beta) / (counts.sum() + 20 * config.beta)
    assert np.max(np.abs(model.phi[0] - expected)) < 1e-12


def test_criterion_3_planted_topic_recovery():
    start = time.perf_counter()
    streams, phi_true = planted_streams(
        seed=103, n_docs=500, doc_len=50, n_topics=3, words_per_topic=20
    )
    config = LdaConfig(seed=7, K=3, alpha=0.1, sweeps=80, burn_in=60, sample_lag=4)
    model = fit_lda(streams, config, n_terms=60)
    _, similarity = match_topics(model.phi, phi_true)
    assert similarity >= 0.8
    assert time.perf_counter() - start < 60.0


def test_criterion_4_prevalence_oracle():
    rng = random.Random(104)
    streams = [
        [rng.randrange(15) for _ in range(rng.randrange(5, 25))]
        for _ in range(100)
    ]
    cells = [(f"m{i % 2}", 2008 + i % 5) for i in range(100)]
    doc_ids = [f"d{i}" for i in range(100)]
    config = LdaConfig(seed=9, K=6, sweeps=12, burn_in=6, sample_lag=2)
    model = fit_lda(streams, config, n_terms=15, doc_ids=doc_ids)
    corpus = Corpus.build(
        [Document(doc_ids[i], s, y, "t") for i, (s, y) in enumerate(cells)]
    )
    cell_sums = {}
    for topic in range(config.K):
        for pt in topic_prevalence(model, corpus, topic):
            members = [
                model.theta[i, topic]
                for i, (s, y) in enumerate(cells)
                if s == pt.source and y == pt.year
            ]
            naive = sum(members) / len(members)
            assert abs(pt.value - naive) < 1e-12
            key = (pt.source, pt.year)
            cell_sums[key] = cell_sums.get(key, 0.0) + pt.value
    for total in cell_sums.values():
        assert abs(total - 1.0) < 1e-9


def test_criterion_5_frequency_oracle_and_bounds():
    # Hand-built 12-document corpus over two sources and two years.
    texts = {
        ("m1", 2010): ["sol sol mar", "mar luna", "sol flor flor"],
        ("m1", 2011): ["luna luna luna", "sol", "flor mar"],
        ("m2", 2010): ["mar mar mar mar", "luna sol", "flor"],
        ("m2", 2011): ["sol sol", "mar luna flor", "luna"],
    }
    docs = []
    for (source, year), cell_texts in texts.items():
        for i, t in enumerate(cell_texts):
            docs.append(Document(f"{source}-{year}-{i}", source, year, t))
    corpus = Corpus.build(docs)
    wl = WordList("l", frozenset({"sol", "luna"}))
    expected = {
        ("m1", 2010): (4, 8),   # sol x3 + luna x1 of 8 tokens
        ("m1", 2011): (4, 6),
        ("m2", 2010): (2, 7),
        ("m2", 2011): (4, 6),
    }
    points = word_frequency(corpus, wl)
    assert len(points) == 4
    for pt in points:
        hits, total = expected[(pt.source, pt.year)]
        assert (pt.hits, pt.total) == (hits, total)
        assert pt.value == hits / total

    rng = random.Random(105)
    vocab = [f"w{i}" for i in range(10)]
    for _ in range(1000):
        cell_docs = [
            Document(
                f"d{j}", "m", 2010,
                " ".join(rng.choice(vocab) for _ in range(rng.randrange(1, 20))),
            )
            for j in range(rng.randrange(1, 4))
        ]
        wl = WordList(
            "r", frozenset(rng.sample(vocab, rng.randrange(1, 10)))
        )
        for pt in word_frequency(Corpus.build(cell_docs), wl):
            assert 0.0 <= pt.value <= 1.0


def test_criterion_6_fisher_exhaustive_grid():
    start = time.perf_counter()
    comb = math.comb
    threshold_num = 10**7 + 1
    threshold_den = 10**7

    def oracle(a, b, c, d):
        r1, r2, c1 = a + b, c + d, a + c
        total = comb(r1 + r2, c1)
        if total == 0:
            return 1.0
        n_obs = comb(r1, a) * comb(r2, c)
        acc = 0
        for x in range(max(0, c1 - r2), min(r1, c1) + 1):
            n_x = comb(r1, x) * comb(r2, c1 - x)
            if n_x * threshold_den <= n_obs * threshold_num:
                acc += n_x
        return float(Fraction(acc, total))

    cache = {}
    max_err = 0.0
    n_tables = 0
    for a in range(61):
        for b in range(61 - a):
            for c in range(61 - a):
                d_hi = min(60 - c, 60 - b)
                for d in range(d_hi + 1):
                    n_tables += 1
                    key = min(
                        (a, b, c, d), (c, d, a, b), (b, a, d, c), (d, c, b, a),
                        (a, c, b, d), (b, d, a, c), (c, a, d, b), (d, b, c, a),
                    )
                    if key in cache:
                        continue
                    p_impl = fisher_exact_two_sided(*key)
                    err = abs(p_impl - oracle(*key))
                    if err > max_err:
                        max_err = err
                    cache[key] = p_impl
    assert n_tables > 2_000_000
    assert max_err < 1e-10, f"max |p - oracle| = {max_err}"

    # Symmetry identities hold exactly, not just to rounding.
    rng = random.Random(106)
    for _ in range(2000):
        a, b, c, d = (rng.randrange(61) for _ in range(4))
        p = fisher_exact_two_sided(a, b, c, d)
        assert fisher_exact_two_sided(c, d, a, b) == p
        assert fisher_exact_two_sided(b, a, d, c) == p
    assert fisher_exact_two_sided(5, 5, 5, 5) == 1.0
    print(f"\n  fisher grid: {n_tables} tables, {len(cache)} canonical classes, "
          f"max err {max_err:.2e}, {time.perf_counter() - start:.1f}s")


def test_criterion_7_loess_oracles():
    # Exact on collinear data.
    line = [(float(x), 2.0 * x + 1.0) for x in range(11)]
    res = loess_fit(line, SmoothConfig(span=0.5))
    assert np.max(np.abs(res.fitted - np.array([p[1] for p in line]))) < 1e-9

    # Naive per-point weighted-least-squares oracle on a noisy series.
    rng = random.Random(107)
    x = np.array(sorted(rng.uniform(0, 10) for _ in range(50)))
    y = np.sin(x) + np.array([rng.gauss(0, 0.2) for _ in range(50)])
    res = loess_fit(list(zip(x, y)), SmoothConfig(span=0.5))
    for i, x0 in enumerate(x):
        assert abs(res.fitted[i] - naive_loess_point(x, y, x0, 0.5)) < 1e-9

    # Translation and scale equivariance.
    pts = [(float(i), rng.gauss(0, 1)) for i in range(15)]
    base = loess_fit(pts, SmoothConfig(span=0.6))
    shifted = loess_fit([(px, py + 3.0) for px, py in pts], SmoothConfig(span=0.6))
    scaled = loess_fit([(px, 4.0 * py) for px, py in pts], SmoothConfig(span=0.6))
    assert np.max(np.abs(shifted.fitted - (base.fitted + 3.0))) < 1e-9
    assert np.max(np.abs(scaled.fitted - 4.0 * base.fitted)) < 1e-9


def gap_workspace(root, docs_per_cell, tokens_per_doc, lda, seed=108):
    records, truth = gap_study_corpus(
        seed=seed, docs_per_cell=docs_per_cell, tokens_per_doc=tokens_per_doc
    )
    write_jsonl(records, root / "corpus.jsonl")
    (root / "lists.json").write_text(
        json.dumps(
            [{"label": "planted", "words": truth.list_words,
              "provenance": "synthetic injection"}]
        ),
        encoding="utf-8",
    )
    config = {
        "corpus": str(root / "corpus.jsonl"),
        "sources": ["alpha", "beta"],
        "out_dir": str(root / "out"),
        "wordlists": str(root / "lists.json"),
        "lda": lda,
        "selected_topics": [],
    }
    config_path = root / "config.json"
    config_path.write_text(json.dumps(config), encoding="utf-8")
    return config_path, truth


def test_criterion_8_synthetic_gap_study(tmp_path):
    start = time.perf_counter()
    config_path, truth = gap_workspace(
        tmp_path, docs_per_cell=50, tokens_per_doc=200,
        lda={"seed": 13, "K": 4, "alpha": 1.0, "sweeps": 200,
             "burn_in": 150, "sample_lag": 5},
    )
    assert cli_main(["--config", str(config_path), "--quiet", "preprocess"]) == 0
    assert cli_main(["--config", str(config_path), "--quiet", "fit"]) == 0

    # Identify the recovered topic matching the planted gap topic.
    model = load_model(tmp_path / "out" / "model.json")
    vocab = model.vocabulary
    phi_true = np.zeros((truth.phi.shape[0], model.V))
    for k in range(truth.phi.shape[0]):
        for j, word in enumerate(truth.vocab):
            if word in vocab.term_to_id:
                phi_true[k, vocab.term_to_id[word]] = truth.phi[k, j]
    assignment, similarity = match_topics(model.phi, phi_true)
    assert similarity >= 0.8
    gap_topic = assignment[truth.gap_topic]

    config = json.loads(config_path.read_text(encoding="utf-8"))
    config["selected_topics"] = [{"topic": gap_topic, "label": "gap"}]
    config_path.write_text(json.dumps(config), encoding="utf-8")
    assert cli_main(["--config", str(config_path), "--quiet", "analyze"]) == 0
    assert cli_main(["--config", str(config_path), "--quiet", "report"]) == 0

    series = {"alpha": {}, "beta": {}}
    with open(tmp_path / "out" / "prevalence.csv", encoding="utf-8",
              newline="") as fh:
        for row in csv.DictReader(fh):
            series[row["source"]][int(row["year"])] = float(row["value"])
    years = sorted(series["alpha"])
    assert years == list(range(2008, 2019))

    # (a) Smoothed prevalence gap is monotone-decreasing within +-0.03.
    def smoothed(values):
        return loess_fit(
            [(float(y), values[y]) for y in years], SmoothConfig()
        ).fitted

    gap = smoothed(series["alpha"]) - smoothed(series["beta"])
    for earlier, later in zip(gap, gap[1:]):
        assert later <= earlier + 0.03, f"gap series not closing: {gap}"
    assert gap[0] > 0.15  # opens wide...
    assert abs(gap[-1]) < 0.05  # ...and closes

    # (b) The 3:1 planted list is significant in >= 9 of 11 years.
    with open(tmp_path / "out" / "significance.csv", encoding="utf-8",
              newline="") as fh:
        sig_rows = list(csv.DictReader(fh))
    assert len(sig_rows) == 11
    n_significant = sum(r["significant"] == "True" for r in sig_rows)
    assert n_significant >= 9

    elapsed = time.perf_counter() - start
    assert elapsed < 300.0
    print(f"\n  gap study: similarity {similarity:.3f}, gap {gap[0]:.3f}->"
          f"{gap[-1]:.3f}, {n_significant}/11 significant, {elapsed:.0f}s")


def test_criterion_9_pipeline_determinism(tmp_path):
    lda = {"seed": 21, "K": 4, "sweeps": 30, "burn_in": 20, "sample_lag": 5}
    config_path, _ = gap_workspace(
        tmp_path, docs_per_cell=4, tokens_per_doc=40, lda=lda
    )
    trees = []
    for run in ("one", "two"):
        out = tmp_path / run
        assert cli_main(["--config", str(config_path), "--out", str(out),
                         "--quiet", "pipeline"]) == 0
        tree = {
            str(p.relative_to(out)): p.read_bytes()
            for p in sorted(out.rglob("*"))
            if p.is_file()
        }
        trees.append(tree)
    assert sorted(trees[0]) == sorted(trees[1])
    for name in trees[0]:
        assert trees[0][name] == trees[1][name], f"{name} differs between runs"


def test_criterion_10_stemmer_conformance():
    mismatches = [
        (w, expected, stem(w))
        for w, expected in REFERENCE
        if stem(w) != expected
    ]
    agreement = 1.0 - len(mismatches) / len(REFERENCE)
    assert agreement >= 0.99, (
        f"agreement {agreement:.4%}; exceptions: {mismatches[:20]}"
    )
