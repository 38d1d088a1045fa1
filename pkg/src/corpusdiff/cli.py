"""Command-line driver: preprocess -> fit -> analyze -> report.

All outputs are deterministic for a fixed config and seed (sequential
mode): rerunning a command on unchanged inputs reproduces every output
file byte for byte. Exit codes: 0 success, 2 configuration error,
3 data error, 4 internal error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analysis, loess, svgchart
from .corpus import DEFAULT_YEAR_RANGE, Corpus, Document, load_corpus
from .errors import ConfigError, CorpusDiffError, DataError
from .lda import LdaConfig, fit_lda, load_model, save_model, top_words
from .textprep import (
    DEFAULT_STOPWORDS_PATH,
    FilterLists,
    TokenizerRules,
    build_vocabulary,
    preprocess_document,
    tokenize,
)

log = logging.getLogger("corpusdiff")

ARTIFACT_SCHEMA_VERSION = 1

EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_INTERNAL = 4


@dataclass
class RunConfig:
    corpus_path: str
    sources: tuple[str, str]
    lda: LdaConfig
    year_range: tuple[int, int] = DEFAULT_YEAR_RANGE
    out_dir: str = "corpusdiff-out"
    stopwords_path: str | None = str(DEFAULT_STOPWORDS_PATH)
    curated_exclusions_path: str | None = None
    source_exclusions_path: str | None = None
    wordlists_path: str | None = str(analysis.DEFAULT_WORDLISTS_PATH)
    rules: TokenizerRules = field(default_factory=TokenizerRules)
    min_count: int = 1
    alpha_level: float = 0.05
    denominator: str = "filtered"
    include_empty_docs: bool = False
    smoothing: loess.SmoothConfig = field(default_factory=loess.SmoothConfig)
    densify_charts: bool = False
    selected_topics: list[tuple[int, str]] = field(default_factory=list)
    config_path: str | None = None

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        try:
            lda_raw = dict(raw["lda"])
            lda = LdaConfig(**lda_raw)
            sources = raw["sources"]
            if len(sources) != 2 or sources[0] == sources[1]:
                raise ConfigError("config must name exactly two distinct sources")
            rules_raw = raw.get("tokenizer", {})
            rules = TokenizerRules(**rules_raw)
            smooth_raw = raw.get("smoothing", {})
            densify = bool(smooth_raw.pop("densify", False))
            smoothing = loess.SmoothConfig(**smooth_raw)
            selected = [
                (int(entry["topic"]), str(entry["label"]))
                for entry in raw.get("selected_topics", [])
            ]
            config = cls(
                corpus_path=raw["corpus"],
                sources=(sources[0], sources[1]),
                lda=lda,
                year_range=tuple(raw.get("year_range", DEFAULT_YEAR_RANGE)),
                out_dir=raw.get("out_dir", "corpusdiff-out"),
                stopwords_path=raw.get("stopwords", str(DEFAULT_STOPWORDS_PATH)),
                curated_exclusions_path=raw.get("curated_exclusions"),
                source_exclusions_path=raw.get("source_exclusions"),
                wordlists_path=raw.get("wordlists", str(analysis.DEFAULT_WORDLISTS_PATH)),
                rules=rules,
                min_count=int(raw.get("min_count", 1)),
                alpha_level=float(raw.get("alpha_level", 0.05)),
                denominator=raw.get("denominator", "filtered"),
                include_empty_docs=bool(raw.get("include_empty_docs", False)),
                smoothing=smoothing,
                densify_charts=densify,
                selected_topics=selected,
                config_path=str(path),
            )
        except ConfigError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid config {path}: {exc}") from exc
        if config.denominator not in ("filtered", "raw"):
            raise ConfigError(f"invalid denominator {config.denominator!r}")
        if not Path(config.corpus_path).exists():
            raise ConfigError(f"corpus file not found: {config.corpus_path}")
        for label, p in (
            ("stopwords", config.stopwords_path),
            ("curated_exclusions", config.curated_exclusions_path),
            ("source_exclusions", config.source_exclusions_path),
            ("wordlists", config.wordlists_path),
        ):
            if p is not None and not Path(p).exists():
                raise ConfigError(f"{label} file not found: {p}")
        return config

    def echo(self) -> dict:
        """Config as written to the run manifest (no output-dir state)."""
        return {
            "corpus": self.corpus_path,
            "sources": list(self.sources),
            "year_range": list(self.year_range),
            "stopwords": self.stopwords_path,
            "curated_exclusions": self.curated_exclusions_path,
            "source_exclusions": self.source_exclusions_path,
            "wordlists": self.wordlists_path,
            "tokenizer": {
                "lowercase": self.rules.lowercase,
                "strip_acute_accents": self.rules.strip_acute_accents,
                "min_token_length": self.rules.min_token_length,
            },
            "lda": {
                "seed": self.lda.seed,
                "K": self.lda.K,
                "alpha": self.lda.alpha,
                "beta": self.lda.beta,
                "sweeps": self.lda.sweeps,
                "burn_in": self.lda.burn_in,
                "sample_lag": self.lda.sample_lag,
            },
            "min_count": self.min_count,
            "alpha_level": self.alpha_level,
            "denominator": self.denominator,
            "include_empty_docs": self.include_empty_docs,
            "smoothing": {
                "span": self.smoothing.span,
                "ci_level": self.smoothing.ci_level,
                "densify": self.densify_charts,
            },
            "selected_topics": [
                {"topic": t, "label": label} for t, label in self.selected_topics
            ],
        }


def _sha256(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _update_manifest(out: Path, config: RunConfig, **extra) -> None:
    manifest_path = out / "run-manifest.json"
    manifest = {}
    if manifest_path.exists():
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    manifest["schema_version"] = ARTIFACT_SCHEMA_VERSION
    manifest["config"] = config.echo()
    inputs = manifest.setdefault("inputs", {})
    for p in (
        config.corpus_path,
        config.stopwords_path,
        config.curated_exclusions_path,
        config.source_exclusions_path,
        config.wordlists_path,
    ):
        if p is not None and Path(p).exists():
            inputs[str(p)] = _sha256(p)
    manifest.update(extra)
    manifest_path.write_text(
        json.dumps(manifest, ensure_ascii=False, sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    )


def _filters(config: RunConfig) -> FilterLists:
    return FilterLists.from_files(
        stopwords_path=config.stopwords_path,
        curated_path=config.curated_exclusions_path,
        source_specific_path=config.source_exclusions_path,
        rules=config.rules,
    )


def cmd_preprocess(config: RunConfig, out: Path) -> None:
    """Tokenize, filter and stem the corpus; write vocabulary artifacts."""
    corpus = load_corpus(config.corpus_path, config.year_range)
    filters = _filters(config)
    vocabulary = build_vocabulary(corpus, config.rules, filters, config.min_count)
    pre_dir = out / "preprocessed"
    pre_dir.mkdir(parents=True, exist_ok=True)
    with open(pre_dir / "vocabulary.json", "w", encoding="utf-8") as fh:
        json.dump(
            {
                "schema_version": ARTIFACT_SCHEMA_VERSION,
                "terms": vocabulary.id_to_term,
                "destem": vocabulary.destem_map,
                "doc_freq": {
                    str(k): v for k, v in sorted(vocabulary.doc_freq.items())
                },
            },
            fh,
            ensure_ascii=False,
            separators=(",", ":"),
        )
    with open(pre_dir / "tokens.jsonl", "w", encoding="utf-8") as fh:
        for doc in corpus.documents:
            surface, _ = preprocess_document(doc.text, config.rules, filters)
            n_raw = len(tokenize(doc.text, config.rules))
            fh.write(
                json.dumps(
                    {
                        "id": doc.id,
                        "source": doc.source,
                        "year": doc.year,
                        "stem_ids": doc.tokens,
                        "surface": surface,
                        "n_raw_tokens": n_raw,
                    },
                    ensure_ascii=False,
                    separators=(",", ":"),
                )
                + "\n"
            )
    _update_manifest(
        out,
        config,
        preprocess={
            "documents": len(corpus.documents),
            "vocabulary_size": vocabulary.V,
            "artifact_hashes": {
                "preprocessed/vocabulary.json": _sha256(pre_dir / "vocabulary.json"),
                "preprocessed/tokens.jsonl": _sha256(pre_dir / "tokens.jsonl"),
            },
        },
    )
    log.info("preprocessed %d documents, V=%d", len(corpus.documents), vocabulary.V)


def _read_artifacts(out: Path):
    pre_dir = out / "preprocessed"
    vocab_path = pre_dir / "vocabulary.json"
    tokens_path = pre_dir / "tokens.jsonl"
    if not vocab_path.exists() or not tokens_path.exists():
        raise DataError(f"missing preprocess artifacts under {pre_dir}; run preprocess")
    from .textprep import Vocabulary

    vocab_raw = json.loads(vocab_path.read_text(encoding="utf-8"))
    if vocab_raw.get("schema_version") != ARTIFACT_SCHEMA_VERSION:
        raise DataError("vocabulary artifact has unsupported schema version")
    terms = vocab_raw["terms"]
    vocabulary = Vocabulary(
        id_to_term=terms,
        term_to_id={t: i for i, t in enumerate(terms)},
        destem_map=vocab_raw["destem"],
        doc_freq={int(k): v for k, v in vocab_raw["doc_freq"].items()},
    )
    records = []
    with open(tokens_path, encoding="utf-8") as fh:
        for line in fh:
            records.append(json.loads(line))
    return vocabulary, records


def cmd_fit(config: RunConfig, out: Path) -> None:
    """Fit the topic model over the preprocessed corpus; write summaries."""
    vocabulary, records = _read_artifacts(out)
    streams = [r["stem_ids"] for r in records]
    doc_ids = [r["id"] for r in records]
    model = fit_lda(
        streams,
        config.lda,
        vocabulary=vocabulary,
        doc_ids=doc_ids,
    )
    save_model(model, out / "model.json")
    n_top = min(10, model.V)
    with open(out / "topics.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["topic"] + [f"word_{i}" for i in range(1, 11)])
        for k in range(model.K):
            words = top_words(model, k, n_top)
            writer.writerow([k] + words + [""] * (10 - len(words)))
    _update_manifest(
        out,
        config,
        fit={
            "K": model.K,
            "V": model.V,
            "samples_averaged": model.n_samples,
            "model_hash": _sha256(out / "model.json"),
        },
    )
    log.info("fitted K=%d topics over V=%d stems", model.K, model.V)


def cmd_analyze(config: RunConfig, out: Path) -> None:
    """Compute prevalence and frequency series plus per-year significance."""
    model_path = out / "model.json"
    if not model_path.exists():
        raise DataError(f"missing model file {model_path}; run fit")
    model = load_model(model_path)
    vocabulary, records = _read_artifacts(out)

    source_a, source_b = config.sources
    known = {r["source"] for r in records}
    for s in config.sources:
        if s not in known:
            raise DataError(f"source {s!r} not present in corpus (has {sorted(known)})")

    # Prevalence needs only the partition structure, not the raw text.
    docs = [
        Document(r["id"], r["source"], r["year"], text="", tokens=r["stem_ids"])
        for r in records
        if r["source"] in config.sources
    ]
    corpus = Corpus.build(docs)

    for topic, label in config.selected_topics:
        if not 0 <= topic < model.K:
            raise DataError(f"selected topic {topic} out of range [0, {model.K})")

    prevalence_rows = []
    for topic, label in config.selected_topics:
        points = analysis.topic_prevalence(
            model, corpus, topic, include_empty_docs=config.include_empty_docs
        )
        for pt in points:
            prevalence_rows.append(
                [label, pt.source, pt.year, "", "", repr(pt.value), "", ""]
            )

    word_lists = []
    if config.wordlists_path is not None:
        word_lists = analysis.register_word_lists(config.wordlists_path, config.rules)
    if not word_lists:
        log.warning("no registered word lists; frequency analysis is empty")

    stream_docs = [
        (r["source"], r["year"], r["surface"])
        for r in records
        if r["source"] in config.sources
    ]
    raw_totals = (
        [r["n_raw_tokens"] for r in records if r["source"] in config.sources]
        if config.denominator == "raw"
        else None
    )

    frequency_rows = []
    significance_rows = []
    n_tests = 0
    for word_list in word_lists:
        points = analysis.word_frequency_from_streams(
            stream_docs, word_list, raw_totals
        )
        freq_a = [p for p in points if p.source == source_a]
        freq_b = [p for p in points if p.source == source_b]
        results = analysis.compare_sources(freq_a, freq_b, config.alpha_level)
        n_tests += len(results)
        p_by_year = {r.year: r.p_value for r in results}
        sig_by_year = {r.year: r.significant for r in results}
        for pt in points:
            frequency_rows.append(
                [
                    word_list.label,
                    pt.source,
                    pt.year,
                    pt.hits,
                    pt.total,
                    repr(pt.value),
                    repr(p_by_year[pt.year]) if pt.year in p_by_year else "",
                    sig_by_year.get(pt.year, ""),
                ]
            )
        for r in results:
            significance_rows.append(
                [
                    word_list.label,
                    r.year,
                    source_a,
                    r.table[0],
                    r.table[0] + r.table[1],
                    source_b,
                    r.table[2],
                    r.table[2] + r.table[3],
                    repr(r.p_value),
                    r.significant,
                ]
            )

    header = [
        "list_or_topic", "source", "year", "hits", "total",
        "value", "p_value", "significant",
    ]
    with open(out / "prevalence.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(prevalence_rows)
    with open(out / "frequency.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(frequency_rows)
    with open(out / "significance.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            [
                "list", "year", "source_a", "hits_a", "total_a",
                "source_b", "hits_b", "total_b", "p_value", "significant",
            ]
        )
        writer.writerows(significance_rows)
    _update_manifest(
        out,
        config,
        analyze={
            "selected_topics": len(config.selected_topics),
            "word_lists": len(word_lists),
            "fisher_tests_run": n_tests,
            "multiple_comparison_note": (
                "no correction applied; word lists are pre-registered via the "
                "manifest and the number of tests is disclosed here"
            ),
        },
    )
    log.info(
        "analyzed %d topics, %d word lists, %d Fisher tests",
        len(config.selected_topics), len(word_lists), n_tests,
    )


def _read_series_csv(path: Path):
    """Group a series CSV by label: {label: {source: [(year, value, ...)]}}."""
    table: dict[str, dict[str, list]] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            label = row["list_or_topic"]
            table.setdefault(label, {}).setdefault(row["source"], []).append(
                (int(row["year"]), float(row["value"]), row["significant"])
            )
    return table


def cmd_report(config: RunConfig, out: Path) -> None:
    """Emit one SVG chart per series plus a summary document."""
    for name in ("prevalence.csv", "frequency.csv"):
        if not (out / name).exists():
            raise DataError(f"missing analysis output {out / name}; run analyze")
    charts_dir = out / "charts"
    charts_dir.mkdir(parents=True, exist_ok=True)
    chart_files = []
    for kind, path in (
        ("prevalence", out / "prevalence.csv"),
        ("frequency", out / "frequency.csv"),
    ):
        table = _read_series_csv(path)
        for label in sorted(table):
            by_source = table[label]
            missing = [s for s in config.sources if s not in by_source]
            if missing:
                log.warning(
                    "chart %r skipped: no series for source(s) %s", label, missing
                )
                continue
            spec = svgchart.ChartSpec(
                title=f"{label} ({kind})",
                x_label="year",
                y_label="topic prevalence" if kind == "prevalence" else "word-list frequency",
            )
            shaded = set()
            for i, source in enumerate(config.sources):
                points = sorted(by_source[source])
                years = [p[0] for p in points]
                values = [p[1] for p in points]
                color = svgchart.SOURCE_COLORS[i % len(svgchart.SOURCE_COLORS)]
                spec.series.append(svgchart.RawSeries(source, color, years, values))
                if len(points) >= 3:
                    grid = (
                        loess.densify_grid(np.array(years, dtype=float))
                        if config.densify_charts
                        else None
                    )
                    smooth = loess.loess_fit(
                        [(float(y), v) for y, v in zip(years, values)],
                        config.smoothing,
                        eval_x=grid,
                    )
                    spec.overlays.append(
                        svgchart.SmoothOverlay(
                            source,
                            color,
                            list(smooth.x),
                            list(smooth.fitted),
                            list(smooth.lower),
                            list(smooth.upper),
                        )
                    )
                for year, _, sig in points:
                    if sig == "False":
                        shaded.add(year)
            spec.shaded_years = sorted(shaded)
            svg = svgchart.render_svg(spec)
            target = charts_dir / f"{label}.svg"
            target.write_text(svg, encoding="utf-8")
            chart_files.append(f"charts/{label}.svg")

    n_tests = 0
    if (out / "significance.csv").exists():
        with open(out / "significance.csv", encoding="utf-8", newline="") as fh:
            n_tests = sum(1 for _ in csv.DictReader(fh))
    lines = [
        "# Diachronic two-source comparison report",
        "",
        f"Contrast sources: {config.sources[0]} vs {config.sources[1]}.",
        f"Years: {config.year_range[0]}-{config.year_range[1]}.",
        "",
        "Smoothed curves are LOESS fits (local linear, tricube weights) with "
        f"pointwise {config.smoothing.ci_level:.0%} confidence bands; LOESS "
        "also stands in for the GAM smoother on prevalence charts.",
        "",
        f"Fisher exact tests run: {n_tests} (no multiple-comparison correction; "
        "word lists are pre-registered and the test count is disclosed).",
        f"Significance level: {config.alpha_level}. Years with non-significant "
        "between-source differences are shaded grey in frequency charts.",
        "",
        "## Charts",
        "",
    ]
    lines += [f"- {name}" for name in chart_files]
    (out / "report.md").write_text("\n".join(lines) + "\n", encoding="utf-8")
    _update_manifest(out, config, report={"charts": chart_files})
    log.info("wrote %d charts", len(chart_files))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corpusdiff",
        description=(
            "Fit a topic model over a two-source year-labelled corpus, "
            "contrast topic prevalence and word-list frequencies between "
            "the sources, and emit smoothed time-series reports."
        ),
    )
    parser.add_argument("--config", required=True, help="path to the JSON run config")
    parser.add_argument("--seed", type=int, help="override the sampler seed")
    parser.add_argument("--out", help="override the output directory")
    parser.add_argument("--quiet", action="store_true", help="suppress progress logs")
    parser.add_argument(
        "--topics",
        help="override selected topics, e.g. '50:family,4:business'",
    )
    parser.add_argument(
        "command",
        choices=["preprocess", "fit", "analyze", "report", "pipeline"],
    )
    return parser


def _apply_overrides(config: RunConfig, args) -> RunConfig:
    if args.seed is not None:
        lda = config.lda
        config.lda = LdaConfig(
            seed=args.seed,
            K=lda.K,
            alpha=lda.alpha,
            beta=lda.beta,
            sweeps=lda.sweeps,
            burn_in=lda.burn_in,
            sample_lag=lda.sample_lag,
        )
    if args.out is not None:
        config.out_dir = args.out
    if args.topics is not None:
        selected = []
        for chunk in args.topics.split(","):
            topic, _, label = chunk.partition(":")
            try:
                selected.append((int(topic), label or f"topic-{topic}"))
            except ValueError as exc:
                raise ConfigError(f"bad --topics entry {chunk!r}") from exc
        config.selected_topics = selected
    return config


COMMANDS = {
    "preprocess": [cmd_preprocess],
    "fit": [cmd_fit],
    "analyze": [cmd_analyze],
    "report": [cmd_report],
    "pipeline": [cmd_preprocess, cmd_fit, cmd_analyze, cmd_report],
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.ERROR if args.quiet else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = RunConfig.from_file(args.config)
        config = _apply_overrides(config, args)
        out = Path(config.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for step in COMMANDS[args.command]:
            step(config, out)
    except ConfigError as exc:
        log.error("configuration error: %s", exc)
        return EXIT_CONFIG
    except DataError as exc:
        log.error("data error: %s", exc)
        return EXIT_DATA
    except CorpusDiffError as exc:
        log.error("%s", exc)
        return EXIT_INTERNAL
    except Exception:  # pragma: no cover - defensive
        log.exception("internal error")
        return EXIT_INTERNAL
    return 0


if __name__ == "__main__":
    sys.exit(main())
