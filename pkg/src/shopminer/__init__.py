"""shopminer: marketplace shop discovery, topic modelling and market analytics.

The pipeline runs in stages, each usable as a library module or through the
``shopminer`` CLI:

  harvest      crawl forum fixtures/live pages, validate shop handles against
               the marketplace API and build a normalized product dataset
  corpus       turn the dataset into an encoded bag-of-words corpus
  lda          collapsed-Gibbs LDA training (compiled kernel when available)
  coherence    C_v topic coherence and topic-count selection
  termrank     relevance / saliency term ranking and product querying
  market_stats category counts, CDFs, lognormal price fit, price bins
"""

__version__ = "0.1.0"
