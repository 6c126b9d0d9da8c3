from shopminer.market_stats.stats import (
    DEFAULT_BIN_EDGES,
    DEFAULT_FLAG_KEYWORDS,
    FlaggedProduct,
    LognormalFit,
    PriceBin,
    PriceBinReport,
    PriceStats,
    category_counts,
    empirical_cdf,
    fit_lognormal,
    flag_false_products,
    price_bins,
    price_stats,
)

__all__ = [
    "DEFAULT_BIN_EDGES",
    "DEFAULT_FLAG_KEYWORDS",
    "FlaggedProduct",
    "LognormalFit",
    "PriceBin",
    "PriceBinReport",
    "PriceStats",
    "category_counts",
    "empirical_cdf",
    "fit_lognormal",
    "flag_false_products",
    "price_bins",
    "price_stats",
]
