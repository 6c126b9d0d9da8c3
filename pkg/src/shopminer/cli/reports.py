"""Report assembly: every table goes out as TSV (human) plus JSON (machine),
both schema-tagged and written atomically."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from shopminer.cli.manifest import atomic_write_text
from shopminer.corpus.tokenizer import TokenizerConfig, tokenize
from shopminer.harvest.shops import CATEGORIES
from shopminer.lda.model import LdaModel, dominant_topic_counts, estimate_phi, estimate_theta
from shopminer.market_stats import (
    category_counts,
    empirical_cdf,
    fit_lognormal,
    flag_false_products,
    price_bins,
    price_stats,
)
from shopminer.termrank.ranking import relevance, term_probs


def fmt_cell(value) -> str:
    if isinstance(value, float):
        return format(value, ".10g")
    return str(value)


def write_table(out_dir, name: str, schema: str, columns: list[str], rows) -> list[Path]:
    """Write <name>.tsv and <name>.json; returns both paths."""
    out_dir = Path(out_dir)
    rows = [list(r) for r in rows]
    tsv_lines = ["\t".join(columns)]
    tsv_lines.extend("\t".join(fmt_cell(v) for v in row) for row in rows)
    tsv_path = atomic_write_text(out_dir / f"{name}.tsv", "\n".join(tsv_lines) + "\n")
    payload = {"schema": schema, "columns": columns, "rows": rows}
    json_path = atomic_write_text(
        out_dir / f"{name}.json", json.dumps(payload, sort_keys=True, indent=1) + "\n"
    )
    return [tsv_path, json_path]


def topic_table_rows(model: LdaModel, lam: float, n_key_terms: int) -> list[list]:
    """Per-topic summary: dominant-document count plus key terms in both
    relevance order and raw probability order, sorted by document count."""
    phi = estimate_phi(model)
    theta = estimate_theta(model)
    p_w = term_probs(model)
    doc_counts = dominant_topic_counts(theta)
    rows = []
    for topic in range(model.k):
        by_relevance = [
            ts.term for ts in relevance(phi, p_w, topic, lam, model.vocabulary)[:n_key_terms]
        ]
        by_phi = [
            model.vocabulary.term_of(int(w))
            for w in np.lexsort((np.arange(phi.shape[1]), -phi[topic]))[:n_key_terms]
        ]
        rows.append(
            [
                topic,
                int(doc_counts[topic]),
                ", ".join(by_relevance),
                ", ".join(by_phi),
            ]
        )
    rows.sort(key=lambda r: (-r[1], r[0]))
    return rows


def sample_product_rows(
    model: LdaModel,
    dataset,
    lam: float,
    n_key_terms: int,
    per_topic: int,
    tokenizer_config: TokenizerConfig,
) -> list[list]:
    """Most topic-typical titles: products ranked per topic by how many of
    the topic's key terms their title contains, ties to the shorter title."""
    phi = estimate_phi(model)
    p_w = term_probs(model)
    titles = [(h, p.title) for h, p in dataset.products()]
    tokenized = [set(tokenize(t, tokenizer_config)) for _, t in titles]
    rows = []
    for topic in range(model.k):
        key_terms = {
            ts.term for ts in relevance(phi, p_w, topic, lam, model.vocabulary)[:n_key_terms]
        }
        scored = []
        for (handle, title), tokens in zip(titles, tokenized):
            hits = len(key_terms & tokens)
            if hits > 0:
                scored.append((-hits, len(title), title, handle))
        scored.sort()
        for neg_hits, _, title, handle in scored[:per_topic]:
            rows.append([topic, -neg_hits, title, handle])
    return rows


def market_bundle(out_dir, dataset, config) -> list[Path]:
    """Category counts, CDFs, lognormal fit, price summary/bins and flags."""
    paths = []
    counts = category_counts(dataset)
    paths += write_table(
        out_dir,
        "category_counts",
        "shopminer.category_counts.v1",
        ["category", "count"],
        [[c, counts[c]] for c in CATEGORIES] + [["total", sum(counts.values())]],
    )

    items_per_shop = [len(shop.products) for shop in dataset]
    paths += write_table(
        out_dir,
        "items_per_shop_cdf",
        "shopminer.cdf.v1",
        ["x", "cum_fraction"],
        [[float(x), f] for x, f in empirical_cdf(items_per_shop)],
    )
    prices = [p.price_usd for _, p in dataset.products()]
    paths += write_table(
        out_dir,
        "price_cdf",
        "shopminer.cdf.v1",
        ["x", "cum_fraction"],
        [[x, f] for x, f in empirical_cdf(prices)],
    )

    fit = fit_lognormal(prices)
    paths += write_table(
        out_dir,
        "lognormal_fit",
        "shopminer.lognormal_fit.v1",
        ["mu", "sigma", "n_used", "n_excluded"],
        [[fit.mu, fit.sigma, fit.n_used, fit.n_excluded]],
    )

    stats = price_stats(dataset)
    paths += write_table(
        out_dir,
        "price_summary",
        "shopminer.price_summary.v1",
        ["n", "median", "max", "fraction_1_to_10"],
        [[stats.n, stats.median, stats.max_price, stats.band_fraction]],
    )

    report = price_bins(dataset, config.stats.bin_edges)
    bin_rows = []
    for b in report.bins:
        label = f">={b.lo:g}" if b.hi is None else f"[{b.lo:g},{b.hi:g})"
        row = [label, b.total]
        for c in CATEGORIES:
            row += [b.counts[c], b.fractions[c]]
        bin_rows.append(row)
    bin_cols = ["bin", "total"]
    for c in CATEGORIES:
        bin_cols += [f"{c}_count", f"{c}_fraction"]
    paths += write_table(out_dir, "price_bins", "shopminer.price_bins.v1", bin_cols, bin_rows)

    flags = flag_false_products(
        dataset,
        price_threshold=config.stats.flag_price_threshold,
        keywords=config.stats.flag_keywords,
    )
    paths += write_table(
        out_dir,
        "flagged_products",
        "shopminer.flagged_products.v1",
        ["shop", "title", "price_usd", "category", "rules"],
        [
            [f.shop_handle, f.product.title, f.product.price_usd, f.product.category,
             "; ".join(f.rules)]
            for f in flags
        ],
    )
    return paths
