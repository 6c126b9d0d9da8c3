"""Marketplace API client, handle validation and shop retrieval.

The API contract (defined here; the marketplace never documented one) is a
minimal paginated JSON surface the fixture store replays:

    GET {base}/api/v1/shops/{handle}            -> 200 {..} | 404
    GET {base}/api/v1/shops/{handle}/products?page=N -> 200 [products] | 404

Product pages start at 1 and are exhausted when a page returns an empty
array.  Transient failures (transport errors, 5xx) are retried with
exponential backoff; a handle that keeps failing is reported as unknown,
never silently dropped.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field

from shopminer.errors import DataError, ShopGoneError, TransportError
from shopminer.harvest.fetcher import FetchRequest, Fetcher

log = logging.getLogger(__name__)

CATEGORIES = ("account", "service", "file")
DEFAULT_CATEGORY = "account"


@dataclass(frozen=True)
class Product:
    title: str
    price_usd: float
    category: str
    metadata: dict[str, str] = field(default_factory=dict)


@dataclass
class Shop:
    handle: str
    products: list[Product]
    retrieved_at: str  # ISO-8601 UTC


@dataclass
class ValidationResult:
    valid: list[str]
    invalid: list[str]
    unknown: list[str]  # transient failures persisted past all retries


class ShopClient:
    def __init__(
        self,
        fetcher: Fetcher,
        api_base: str = "https://shoppy.gg",
        retries: int = 3,
        backoff_base_ms: int = 250,
        sleeper=time.sleep,
    ):
        self.fetcher = fetcher
        self.api_base = api_base.rstrip("/")
        self.retries = retries
        self.backoff_base_ms = backoff_base_ms
        self.sleeper = sleeper

    def _shop_url(self, handle: str) -> str:
        return f"{self.api_base}/api/v1/shops/{handle}"

    def _products_url(self, handle: str, page: int) -> str:
        return f"{self._shop_url(handle)}/products?page={page}"

    def _get(self, url: str):
        """GET with retries on transport errors and 5xx responses."""
        attempts = self.retries + 1
        last_error: Exception | None = None
        for attempt in range(attempts):
            if attempt > 0:
                self.sleeper(self.backoff_base_ms * 2 ** (attempt - 1) / 1000.0)
            try:
                response = self.fetcher.fetch(FetchRequest(url=url))
            except TransportError as exc:
                last_error = exc
                continue
            if response.status >= 500:
                last_error = TransportError(f"{url}: server error {response.status}")
                continue
            return response
        raise TransportError(f"{url}: exhausted {attempts} attempts: {last_error}")

    def shop_exists(self, handle: str) -> bool:
        response = self._get(self._shop_url(handle))
        if response.status == 200:
            return True
        if response.status == 404:
            return False
        raise TransportError(f"unexpected status {response.status} for shop {handle}")

    def shop_meta(self, handle: str):
        response = self._get(self._shop_url(handle))
        if response.status == 404:
            raise ShopGoneError(f"shop {handle} no longer exists")
        if response.status != 200:
            raise TransportError(f"unexpected status {response.status} for shop {handle}")
        return _parse_json(response, f"shop {handle}"), response.fetched_at

    def product_page(self, handle: str, page: int) -> list:
        response = self._get(self._products_url(handle, page))
        if response.status == 404:
            raise ShopGoneError(f"shop {handle} vanished while paginating")
        if response.status != 200:
            raise TransportError(
                f"unexpected status {response.status} for {handle} page {page}"
            )
        parsed = _parse_json(response, f"shop {handle} page {page}")
        if not isinstance(parsed, list):
            raise DataError(f"product page for {handle} is not an array")
        return parsed


def _parse_json(response, what: str):
    try:
        return json.loads(response.body.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise DataError(f"malformed JSON for {what}: {exc}") from exc


def validate_shops(handles, client: ShopClient) -> ValidationResult:
    """Partition handles into existing / missing / undetermined shops.

    Input is deduplicated (first occurrence wins), so the call is idempotent
    over repeated handles.
    """
    result = ValidationResult(valid=[], invalid=[], unknown=[])
    seen: set[str] = set()
    for handle in handles:
        if handle in seen:
            continue
        seen.add(handle)
        try:
            exists = client.shop_exists(handle)
        except TransportError as exc:
            log.warning("validation undetermined for %r: %s", handle, exc)
            result.unknown.append(handle)
            continue
        (result.valid if exists else result.invalid).append(handle)
    return result


def fetch_shop(handle: str, client: ShopClient) -> Shop:
    """Retrieve a validated shop with all product pages exhausted.

    Malformed product entries are skipped and counted; categories outside the
    marketplace's three are mapped to the default ("account") with a warning.
    """
    _, retrieved_at = client.shop_meta(handle)
    products: list[Product] = []
    skipped = 0
    remapped = 0
    page = 1
    while True:
        entries = client.product_page(handle, page)
        if not entries:
            break
        for entry in entries:
            product = _parse_product(entry, handle)
            if product is None:
                skipped += 1
                continue
            if product.category not in CATEGORIES:
                log.warning(
                    "shop %s: unknown category %r mapped to %r (title %r)",
                    handle, product.category, DEFAULT_CATEGORY, product.title,
                )
                remapped += 1
                product = Product(
                    title=product.title,
                    price_usd=product.price_usd,
                    category=DEFAULT_CATEGORY,
                    metadata=product.metadata,
                )
            products.append(product)
        page += 1
    if skipped:
        log.warning("shop %s: skipped %d malformed product entries", handle, skipped)
    if remapped:
        log.info("shop %s: remapped %d products to default category", handle, remapped)
    return Shop(handle=handle, products=products, retrieved_at=retrieved_at)


def _parse_product(entry, handle: str) -> Product | None:
    if not isinstance(entry, dict):
        log.warning("shop %s: non-object product entry skipped", handle)
        return None
    title = entry.get("title")
    if not isinstance(title, str) or not title.strip():
        log.warning("shop %s: product with missing/blank title skipped", handle)
        return None
    price = entry.get("price_usd")
    if not isinstance(price, (int, float)) or isinstance(price, bool) or price < 0:
        log.warning("shop %s: product %r has invalid price %r", handle, title, price)
        return None
    category = entry.get("category")
    if not isinstance(category, str):
        category = ""
    metadata_raw = entry.get("metadata", {})
    metadata = (
        {str(k): str(v) for k, v in metadata_raw.items()}
        if isinstance(metadata_raw, dict)
        else {}
    )
    return Product(
        title=title.strip(),
        price_usd=float(price),
        category=category.strip().lower(),
        metadata=metadata,
    )
