"""Command-line pipeline: harvest, train, sweep, report, query.

Exit codes: 0 success, 2 usage, 3 bad/missing data or configuration,
4 internal error.  Logs go to stderr, data only to files.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from shopminer import __version__
from shopminer.cli.config import PipelineConfig, load_config
from shopminer.cli.manifest import atomic_write_text, write_manifest
from shopminer.cli.reports import market_bundle, sample_product_rows, topic_table_rows, write_table
from shopminer.corpus.builder import build_documents, build_vocabulary, encode
from shopminer.corpus.tokenizer import DEFAULT_STOPWORDS, TokenizerConfig
from shopminer.errors import DataError, ShopGoneError, ShopminerError
from shopminer.harvest.dataset import ShopDataset
from shopminer.harvest.fetcher import FixtureFetcher, LiveFetcher
from shopminer.harvest.forum import CrawlLimits, CrawlRules, crawl_forum
from shopminer.harvest.shops import ShopClient, fetch_shop, validate_shops
from shopminer.harvest.summary import build_summary, summary_to_tsv
from shopminer.lda.model import (
    LdaHyperparams,
    estimate_phi,
    estimate_theta,
    load_model,
    save_model,
    train,
)
from shopminer.coherence.cv import select_k
from shopminer.coherence.windows import build_window_stats
from shopminer.rng import derive_seed
from shopminer.termrank.query import query_products
from shopminer.termrank.ranking import top_salient_terms

log = logging.getLogger("shopminer")

FIXTURE_DIR_ENV = "SHOPMINER_FIXTURE_DIR"


def tokenizer_config(config: PipelineConfig) -> TokenizerConfig:
    stopwords = set() if config.corpus.disable_default_stopwords else set(DEFAULT_STOPWORDS)
    stopwords.update(config.corpus.extra_stopwords)
    return TokenizerConfig(min_len=config.corpus.min_token_len, stopwords=frozenset(stopwords))


def _out_dir(config: PipelineConfig) -> Path:
    path = Path(config.output.dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _build_fetcher(config: PipelineConfig, args):
    if config.harvest.live:
        return LiveFetcher(min_delay_ms=config.harvest.effective_delay_ms())
    fixture_dir = (
        os.environ.get(FIXTURE_DIR_ENV)
        or getattr(args, "fixture_dir", None)
        or config.harvest.fixture_dir
    )
    if not fixture_dir:
        raise DataError("no fixture directory configured (and live mode is off)")
    if not Path(fixture_dir).is_dir():
        raise DataError("fixture directory does not exist", context=str(fixture_dir))
    return FixtureFetcher(fixture_dir)


def _load_dataset(config: PipelineConfig, args) -> tuple[ShopDataset, Path]:
    path = Path(getattr(args, "dataset", None) or _out_dir(config) / "dataset.ndjson")
    if not path.exists():
        raise DataError("dataset file not found (run `shopminer harvest` first?)", context=str(path))
    return ShopDataset.load(path), path


def _load_model(config: PipelineConfig, args):
    explicit = getattr(args, "model", None)
    out = _out_dir(config)
    candidates = [Path(explicit)] if explicit else [out / "model_best.npz", out / "model.npz"]
    for path in candidates:
        if path.exists():
            return load_model(path), path
    raise DataError(
        "model file not found (run `shopminer train` or `shopminer sweep` first?)",
        context=str(candidates[0]),
    )


def _build_corpus(config: PipelineConfig, dataset: ShopDataset):
    build = build_documents(dataset, tokenizer_config(config))
    if build.dropped_empty:
        log.info("dropped %d shops with empty documents: %s",
                 len(build.dropped_empty), ", ".join(build.dropped_empty[:10]))
    vocab = build_vocabulary(
        build.documents, min_df=config.corpus.min_df, max_df_ratio=config.corpus.max_df_ratio
    )
    corpus = encode(build.documents, vocab)
    if corpus.dropped_oov:
        log.info("dropped %d fully out-of-vocabulary documents", len(corpus.dropped_oov))
    return corpus


def _replace_into(path: Path, writer) -> Path:
    tmp = path.with_name(path.name + ".new")
    writer(tmp)
    os.replace(tmp, path)
    return path


def _save_corpus_files(corpus, out: Path) -> list[Path]:
    return [
        _replace_into(out / "corpus_vocab.tsv", corpus.vocabulary.save),
        _replace_into(out / "corpus_docs.txt", corpus.save),
    ]


def _hp_from_config(config: PipelineConfig, k: int, seed: int) -> LdaHyperparams:
    return LdaHyperparams(
        k=k,
        alpha=config.lda.alpha,
        beta=config.lda.beta,
        iterations=config.lda.iterations,
        seed=seed,
        average_samples=config.lda.average_samples,
    )


def cmd_harvest(config: PipelineConfig, args) -> int:
    out = _out_dir(config)
    fetcher = _build_fetcher(config, args)
    h = config.harvest
    if not h.forums:
        raise DataError("no forum seeds configured under harvest.forums")
    limits = CrawlLimits(
        max_pages=h.max_pages, max_depth=h.max_depth, min_delay_ms=h.effective_delay_ms()
    )
    rules = CrawlRules(
        follow_patterns=tuple(h.follow_patterns),
        username_class=h.username_class,
        market_hosts=tuple(h.market_hosts),
    )

    records = []
    for seed in h.forums:
        log.info("crawling %s from %s", seed.name, seed.seed_url)
        records.extend(
            crawl_forum(seed.seed_url, fetcher, limits=limits, rules=rules, forum=seed.name)
        )
    log.info("collected %d records", len(records))

    handles = []
    seen = set()
    for record in records:
        if record.shop_handle and record.shop_handle not in seen:
            seen.add(record.shop_handle)
            handles.append(record.shop_handle)

    client = ShopClient(fetcher, api_base=h.api_base, retries=h.retries)
    validation = validate_shops(handles, client)
    log.info(
        "validated %d handles: %d valid, %d invalid, %d unknown",
        len(handles), len(validation.valid), len(validation.invalid), len(validation.unknown),
    )

    shops = []
    for handle in validation.valid:
        try:
            shops.append(fetch_shop(handle, client))
        except ShopGoneError as exc:
            log.warning("shop vanished after validation: %s", exc)
    dataset = ShopDataset(shops=shops)

    dataset_path = _replace_into(out / "dataset.ndjson", dataset.save)

    summary = build_summary(records, validation.valid)
    summary_path = atomic_write_text(out / "harvest_summary.tsv", summary_to_tsv(summary))
    payload = {
        "schema": "shopminer.harvest_summary.v1",
        "rows": [
            {"forum": r.forum, "source": r.source, "collected": r.collected, "valid": r.valid}
            for r in summary.rows
        ],
        "total_collected_unique": summary.total_collected,
        "total_valid_unique": summary.total_valid,
    }
    summary_json = atomic_write_text(
        out / "harvest_summary.json", json.dumps(payload, indent=1, sort_keys=True) + "\n"
    )
    outputs = [dataset_path, summary_path, summary_json]
    write_manifest(
        out, "harvest", config,
        outputs=outputs,
        extra={"unknown_handles": validation.unknown},
    )
    return 0


def cmd_train(config: PipelineConfig, args) -> int:
    out = _out_dir(config)
    dataset, dataset_path = _load_dataset(config, args)
    corpus = _build_corpus(config, dataset)
    outputs = _save_corpus_files(corpus, out)

    k = getattr(args, "k", None) or config.lda.k
    hp = _hp_from_config(config, k, derive_seed(config.seed, k))
    log.info("training k=%d on %d docs / %d tokens", k, len(corpus.documents), corpus.n_tokens)
    model = train(corpus, hp)

    model_path = _replace_into(out / "model.npz", lambda p: save_model(model, p))
    outputs.append(model_path)

    phi = estimate_phi(model)
    theta = estimate_theta(model)
    outputs += write_table(
        out, "phi", "shopminer.phi.v1",
        ["topic"] + list(model.vocabulary.term_by_id),
        [[t] + [float(x) for x in phi[t]] for t in range(model.k)],
    )
    outputs += write_table(
        out, "theta", "shopminer.theta.v1",
        ["shop"] + [f"topic_{t}" for t in range(model.k)],
        [[model.doc_handles[d]] + [float(x) for x in theta[d]] for d in range(theta.shape[0])],
    )
    write_manifest(
        out, "train", config,
        inputs={"dataset": dataset_path},
        outputs=outputs,
        extra={"k": k, "train_seed": hp.seed},
    )
    return 0


def cmd_sweep(config: PipelineConfig, args) -> int:
    out = _out_dir(config)
    dataset, dataset_path = _load_dataset(config, args)
    corpus = _build_corpus(config, dataset)
    outputs = _save_corpus_files(corpus, out)

    stats = build_window_stats(
        (ids for _, ids in corpus.documents), config.coherence.window_width
    )
    hp_template = _hp_from_config(config, 2, config.seed)
    report = select_k(
        corpus, config.coherence.k_values, hp_template,
        stats=stats, top_n=config.coherence.top_n,
    )
    best_k = report.best_k
    log.info("sweep done: best k=%d (C_v=%.4f)", best_k, report.scores[best_k])

    outputs += write_table(
        out, "coherence", "shopminer.coherence.v1",
        ["k", "c_v"],
        [[k, score] for k, score in report.to_rows()],
    )
    full = {
        "schema": "shopminer.coherence_full.v1",
        "window_width": report.window_width,
        "top_n": report.top_n,
        "master_seed": report.master_seed,
        "best_k": best_k,
        "scores": {str(k): v for k, v in sorted(report.scores.items())},
        "per_topic": {str(k): v for k, v in sorted(report.per_topic.items())},
        "seeds": {str(k): v for k, v in sorted(report.seeds.items())},
    }
    outputs.append(
        atomic_write_text(out / "coherence_full.json", json.dumps(full, indent=1, sort_keys=True) + "\n")
    )

    # Retraining with the recorded per-k seed reproduces the swept model exactly.
    best_model = train(corpus, _hp_from_config(config, best_k, report.seeds[best_k]))
    model_path = _replace_into(out / "model_best.npz", lambda p: save_model(best_model, p))
    outputs.append(model_path)

    write_manifest(
        out, "sweep", config,
        inputs={"dataset": dataset_path},
        outputs=outputs,
        extra={"best_k": best_k, "k_values": config.coherence.k_values},
    )
    return 0


def cmd_report(config: PipelineConfig, args) -> int:
    out = _out_dir(config)
    dataset, dataset_path = _load_dataset(config, args)
    if len(dataset) == 0 or dataset.n_products == 0:
        raise DataError("dataset is empty; nothing to report", context=str(dataset_path))
    model, model_path = _load_model(config, args)

    outputs = write_table(
        out, "topic_table", "shopminer.topic_table.v1",
        ["topic", "documents", "key_terms_relevance", "key_terms_probability"],
        topic_table_rows(model, config.termrank.relevance_lambda, config.termrank.key_terms),
    )
    outputs += write_table(
        out, "sample_products", "shopminer.sample_products.v1",
        ["topic", "term_hits", "title", "shop"],
        sample_product_rows(
            model, dataset,
            config.termrank.relevance_lambda,
            config.termrank.key_terms,
            config.termrank.samples_per_topic,
            tokenizer_config(config),
        ),
    )
    outputs += market_bundle(out, dataset, config)
    write_manifest(
        out, "report", config,
        inputs={"dataset": dataset_path, "model": model_path},
        outputs=outputs,
    )
    return 0


def cmd_query(config: PipelineConfig, args) -> int:
    out = _out_dir(config)
    dataset, dataset_path = _load_dataset(config, args)
    model, model_path = _load_model(config, args)
    if not 0 <= args.topic < model.k:
        raise DataError(f"topic {args.topic} out of range for k={model.k}")

    n_terms = config.termrank.query_top_terms if args.n_terms is None else args.n_terms
    terms = top_salient_terms(model, args.topic, n_terms)
    augment = list(config.termrank.augment_terms) if args.augment else []
    log.info("querying topic %d with terms %s + augment %s", args.topic, terms, augment)

    matches = query_products(dataset, terms, augment, tokenizer_config(config))
    outputs = write_table(
        out, f"query_topic{args.topic}", "shopminer.query.v1",
        ["title", "records", "price_usd", "matched_terms", "shop"],
        [
            [
                m.product.title,
                m.record_count if m.record_count is not None else "",
                m.product.price_usd,
                ", ".join(m.matched_terms),
                m.shop_handle,
            ]
            for m in matches
        ],
    )
    write_manifest(
        out, "query", config,
        inputs={"dataset": dataset_path, "model": model_path},
        outputs=outputs,
        extra={"topic": args.topic, "terms": terms, "augment": augment},
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shopminer",
        description="Marketplace shop discovery, topic modelling and market analytics.",
    )
    parser.add_argument("--version", action="version", version=f"shopminer {__version__}")
    parser.add_argument("--config", help="path to the pipeline config JSON")
    parser.add_argument("--seed", type=int, help="override the master seed")
    parser.add_argument("--out", help="override the output directory")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("harvest", help="crawl forums, validate and retrieve shops")
    p.add_argument("--fixture-dir", help="fixture store directory (overrides config)")
    p.set_defaults(func=cmd_harvest)

    p = sub.add_parser("train", help="train a single LDA model")
    p.add_argument("--dataset", help="dataset file (default: <out>/dataset.ndjson)")
    p.add_argument("--k", type=int, help="topic count (default: config lda.k)")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("sweep", help="train across k values and select by coherence")
    p.add_argument("--dataset", help="dataset file (default: <out>/dataset.ndjson)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("report", help="emit topic tables and market statistics")
    p.add_argument("--dataset", help="dataset file")
    p.add_argument("--model", help="model file (default: <out>/model_best.npz or model.npz)")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("query", help="query products with a topic's salient terms")
    p.add_argument("--dataset", help="dataset file")
    p.add_argument("--model", help="model file")
    p.add_argument("--topic", type=int, required=True)
    p.add_argument("--n-terms", type=int, default=None)
    p.add_argument("--no-augment", dest="augment", action="store_false",
                   help="skip configured query augmentation terms")
    p.set_defaults(func=cmd_query)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(
        stream=sys.stderr, level=logging.INFO, format="%(levelname)s %(name)s: %(message)s"
    )
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config) if args.config else PipelineConfig()
        if args.seed is not None:
            config.seed = args.seed
        if args.out:
            config.output.dir = args.out
        return args.func(config, args)
    except ShopminerError as exc:
        log.error("%s", exc)
        return 3
    except Exception:  # pragma: no cover - defensive
        log.exception("internal error")
        return 4


if __name__ == "__main__":
    sys.exit(main())
