"""Quantitative market analytics over a shop dataset.

Everything here is a pure aggregation: category tallies, empirical CDFs,
a lognormal MLE over strictly positive prices, fractional price bins and
heuristic false-product flagging.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from shopminer.corpus.tokenizer import TokenizerConfig, tokenize
from shopminer.errors import ConfigurationError, InsufficientDataError
from shopminer.harvest.shops import CATEGORIES, Product

DEFAULT_BIN_EDGES = (0.0, 1.0, 5.0, 10.0, 50.0, 100.0, 500.0)

# Seeded from the recurring title patterns of not-for-sale placeholder
# listings: vendor terms, support/contact pointers, chat-server invites.
DEFAULT_FLAG_KEYWORDS = (
    "terms of service",
    "discord",
    "telegram",
    "read before buying",
    "contact",
    "support",
)


@dataclass(frozen=True)
class LognormalFit:
    mu: float
    sigma: float
    n_used: int
    n_excluded: int


@dataclass(frozen=True)
class PriceStats:
    n: int
    median: float
    max_price: float
    band_fraction: float  # fraction of prices in [1, 10] inclusive


@dataclass(frozen=True)
class PriceBin:
    lo: float
    hi: float | None  # None = unbounded last bin
    counts: dict[str, int]
    fractions: dict[str, float]

    @property
    def total(self) -> int:
        return sum(self.counts.values())


@dataclass(frozen=True)
class PriceBinReport:
    edges: tuple[float, ...]
    bins: tuple[PriceBin, ...]


@dataclass(frozen=True)
class FlaggedProduct:
    shop_handle: str
    product: Product
    rules: tuple[str, ...]


def category_counts(dataset) -> dict[str, int]:
    counts = {c: 0 for c in CATEGORIES}
    for _, product in dataset.products():
        counts[product.category] += 1
    return counts


def empirical_cdf(values) -> list[tuple[float, float]]:
    """Right-continuous step points (x, F(x)) over sorted distinct values."""
    values = sorted(values)
    n = len(values)
    if n == 0:
        return []
    points = []
    for i, x in enumerate(values):
        if i + 1 == n or values[i + 1] != x:
            points.append((x, (i + 1) / n))
    return points


def fit_lognormal(prices) -> LognormalFit:
    """MLE on log-prices: mu = mean, sigma = population std deviation.

    Non-positive prices carry no information about a lognormal and are
    excluded (counted in n_excluded).
    """
    prices = list(prices)
    positive = [p for p in prices if p > 0]
    excluded = len(prices) - len(positive)
    if len(positive) < 2:
        raise InsufficientDataError(
            f"lognormal fit needs >= 2 positive prices, got {len(positive)}"
        )
    logs = [math.log(p) for p in positive]
    mu = sum(logs) / len(logs)
    variance = sum((x - mu) ** 2 for x in logs) / len(logs)
    return LognormalFit(
        mu=mu, sigma=math.sqrt(variance), n_used=len(positive), n_excluded=excluded
    )


def price_stats(dataset) -> PriceStats:
    prices = sorted(p.price_usd for _, p in dataset.products())
    if not prices:
        raise InsufficientDataError("no products in dataset")
    n = len(prices)
    median = prices[(n - 1) // 2]  # lower-middle convention on even counts
    in_band = sum(1 for p in prices if 1.0 <= p <= 10.0)
    return PriceStats(
        n=n, median=median, max_price=prices[-1], band_fraction=in_band / n
    )


def price_bins(dataset, edges=DEFAULT_BIN_EDGES) -> PriceBinReport:
    """Half-open bins [e_i, e_{i+1}) plus a final unbounded [e_last, inf)."""
    edges = tuple(float(e) for e in edges)
    if len(edges) < 1 or any(a >= b for a, b in zip(edges, edges[1:])):
        raise ConfigurationError(f"bin edges must be strictly ascending: {edges}")

    counts = [dict.fromkeys(CATEGORIES, 0) for _ in edges]
    for _, product in dataset.products():
        price = product.price_usd
        if price < edges[0]:
            raise ConfigurationError(
                f"price {price} below the first bin edge {edges[0]}"
            )
        idx = len(edges) - 1
        for i in range(len(edges) - 1):
            if edges[i] <= price < edges[i + 1]:
                idx = i
                break
        counts[idx][product.category] += 1

    bins = []
    for i, bin_counts in enumerate(counts):
        total = sum(bin_counts.values())
        fractions = {
            c: (bin_counts[c] / total if total else 0.0) for c in CATEGORIES
        }
        bins.append(
            PriceBin(
                lo=edges[i],
                hi=edges[i + 1] if i + 1 < len(edges) else None,
                counts=bin_counts,
                fractions=fractions,
            )
        )
    return PriceBinReport(edges=edges, bins=tuple(bins))


def flag_false_products(
    dataset,
    price_threshold: float = 500.0,
    keywords=DEFAULT_FLAG_KEYWORDS,
    tokenizer_config: TokenizerConfig = TokenizerConfig(),
) -> list[FlaggedProduct]:
    """Flag listings priced at/above the threshold that look like non-goods.

    Two rules, each recorded on the flag: a case-insensitive keyword phrase
    in the title, or a service-category listing whose title carries no
    tokenizable information.  The price threshold is conjunctive: nothing
    below it is flagged.
    """
    keywords = [k.lower() for k in keywords]
    flagged = []
    for handle, product in dataset.products():
        if product.price_usd < price_threshold:
            continue
        rules = []
        title_lower = product.title.lower()
        for keyword in keywords:
            if keyword in title_lower:
                rules.append(f"keyword:{keyword}")
        if product.category == "service" and not tokenize(product.title, tokenizer_config):
            rules.append("service-zero-information-title")
        if rules:
            flagged.append(
                FlaggedProduct(shop_handle=handle, product=product, rules=tuple(rules))
            )
    return flagged
