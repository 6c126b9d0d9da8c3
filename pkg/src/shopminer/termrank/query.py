"""Query product titles with selected terms.

Matching is whole-token (a query term "db" does not match "dbrand") and
case-insensitive; titles are tokenized exactly like corpus documents.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Sequence

from shopminer.corpus.tokenizer import TokenizerConfig, tokenize
from shopminer.harvest.shops import Product


@dataclass
class QueryMatch:
    shop_handle: str
    product: Product
    matched_terms: list[str]
    record_count: Optional[int] = None


_MULTIPLIERS = {
    "k": 1_000,
    "m": 1_000_000,
    "mil": 1_000_000,
    "million": 1_000_000,
    "b": 1_000_000_000,
    "billion": 1_000_000_000,
}
_COUNT_RE = re.compile(
    r"(\d+(?:[.,]\d+)?)\s*(billion|million|mil|k|m|b)\b", re.IGNORECASE
)


def parse_record_count(title: str) -> Optional[int]:
    """Best-effort record count from titles like "528M" or "1.1 Million".

    Heuristic: only suffixed numbers count; a comma between digits is read as
    a decimal separator ("4,6M"); the largest candidate wins.  Returns None
    when no suffixed number is present.
    """
    best = None
    for number, suffix in _COUNT_RE.findall(title):
        value = float(number.replace(",", "."))
        candidate = int(round(value * _MULTIPLIERS[suffix.lower()]))
        if best is None or candidate > best:
            best = candidate
    return best


def query_products(
    dataset,
    terms: Sequence[str],
    augment: Sequence[str] = (),
    config: TokenizerConfig = TokenizerConfig(),
) -> list[QueryMatch]:
    """Products whose titles contain any query term as a whole token.

    ``augment`` terms (e.g. abbreviations) are merged into the query set.
    Results are sorted by descending price, then title, and annotated with
    the terms that hit and a parsed record count where available.
    """
    term_tokens: dict[str, list[str]] = {}
    for term in list(terms) + list(augment):
        toks = tokenize(term, config)
        if toks:
            term_tokens[term] = toks

    matches = []
    for shop in dataset:
        for product in shop.products:
            title_tokens = set(tokenize(product.title, config))
            hit = [
                term
                for term, toks in term_tokens.items()
                if all(t in title_tokens for t in toks)
            ]
            if hit:
                matches.append(
                    QueryMatch(
                        shop_handle=shop.handle,
                        product=product,
                        matched_terms=hit,
                        record_count=parse_record_count(product.title),
                    )
                )
    matches.sort(key=lambda m: (-m.product.price_usd, m.product.title))
    return matches
