from shopminer.harvest.fetcher import (
    FetchRequest,
    FetchResponse,
    Fetcher,
    FixtureFetcher,
    FixtureStore,
    LiveFetcher,
)
from shopminer.harvest.forum import (
    CrawlLimits,
    CrawlRules,
    HarvestRecord,
    SOURCE_SIGNATURE,
    SOURCE_USERNAME,
    crawl_forum,
    extract_signature_links,
    normalize_handle,
)
from shopminer.harvest.shops import (
    CATEGORIES,
    Product,
    Shop,
    ShopClient,
    ValidationResult,
    fetch_shop,
    validate_shops,
)
from shopminer.harvest.dataset import ShopDataset
from shopminer.harvest.summary import HarvestSummary, SummaryRow, build_summary, summary_to_tsv

__all__ = [
    "FetchRequest",
    "FetchResponse",
    "Fetcher",
    "FixtureFetcher",
    "FixtureStore",
    "LiveFetcher",
    "CrawlLimits",
    "CrawlRules",
    "HarvestRecord",
    "SOURCE_SIGNATURE",
    "SOURCE_USERNAME",
    "crawl_forum",
    "extract_signature_links",
    "normalize_handle",
    "CATEGORIES",
    "Product",
    "Shop",
    "ShopClient",
    "ValidationResult",
    "fetch_shop",
    "validate_shops",
    "ShopDataset",
    "HarvestSummary",
    "SummaryRow",
    "build_summary",
    "summary_to_tsv",
]
