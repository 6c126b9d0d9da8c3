"""Normalized shop dataset: the harvest -> corpus file contract.

One shop per line, newline-delimited JSON with sorted keys, so identical
inputs produce byte-identical files.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from shopminer.errors import DataError
from shopminer.harvest.shops import CATEGORIES, Product, Shop

_ISO_RE = re.compile(r"\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}(?:\.\d+)?(?:Z|\+00:00)?")


@dataclass
class ShopDataset:
    shops: list[Shop] = field(default_factory=list)

    def __iter__(self):
        return iter(self.shops)

    def __len__(self):
        return len(self.shops)

    def products(self):
        for shop in self.shops:
            for product in shop.products:
                yield shop.handle, product

    @property
    def n_products(self) -> int:
        return sum(len(s.products) for s in self.shops)

    def save(self, path) -> None:
        handles = [s.handle for s in self.shops]
        if len(set(handles)) != len(handles):
            raise DataError("duplicate shop handles in dataset")
        with open(path, "w", encoding="utf-8") as fh:
            for shop in self.shops:
                record = {
                    "handle": shop.handle,
                    "retrieved_at": shop.retrieved_at,
                    "products": [
                        {
                            "title": p.title,
                            "price_usd": p.price_usd,
                            "category": p.category,
                            "metadata": p.metadata,
                        }
                        for p in shop.products
                    ],
                }
                fh.write(json.dumps(record, sort_keys=True, separators=(",", ":")))
                fh.write("\n")

    @classmethod
    def load(cls, path) -> "ShopDataset":
        shops = []
        seen: set[str] = set()
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                context = f"{path}:{lineno}"
                line = line.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise DataError(f"invalid JSON: {exc}", context=context) from exc
                shops.append(_parse_shop(record, context, seen))
        return cls(shops=shops)


def _parse_shop(record, context: str, seen: set[str]) -> Shop:
    if not isinstance(record, dict):
        raise DataError("shop record must be an object", context=context)
    handle = record.get("handle")
    if not isinstance(handle, str) or not handle:
        raise DataError("missing or empty 'handle'", context=context)
    if handle in seen:
        raise DataError(f"duplicate shop handle {handle!r}", context=context)
    seen.add(handle)
    retrieved_at = record.get("retrieved_at", "")
    if not isinstance(retrieved_at, str) or not _ISO_RE.fullmatch(retrieved_at):
        raise DataError(f"invalid 'retrieved_at' {retrieved_at!r}", context=context)
    raw_products = record.get("products")
    if not isinstance(raw_products, list):
        raise DataError("'products' must be an array", context=context)
    products = []
    for i, entry in enumerate(raw_products):
        if not isinstance(entry, dict):
            raise DataError(f"product {i} must be an object", context=context)
        title = entry.get("title")
        if not isinstance(title, str) or not title.strip():
            raise DataError(f"product {i} has missing/blank title", context=context)
        price = entry.get("price_usd")
        if not isinstance(price, (int, float)) or isinstance(price, bool) or price < 0:
            raise DataError(f"product {i} has invalid price {price!r}", context=context)
        category = entry.get("category")
        if category not in CATEGORIES:
            raise DataError(f"product {i} has invalid category {category!r}", context=context)
        metadata = entry.get("metadata", {})
        if not isinstance(metadata, dict):
            raise DataError(f"product {i} metadata must be an object", context=context)
        products.append(
            Product(
                title=title,
                price_usd=float(price),
                category=category,
                metadata={str(k): str(v) for k, v in metadata.items()},
            )
        )
    return Shop(handle=handle, products=products, retrieved_at=retrieved_at)
