from shopminer.termrank.ranking import (
    TermScore,
    distinctiveness,
    relevance,
    saliency,
    term_probs,
    topic_given_word,
    topic_probs,
    top_salient_terms,
)
from shopminer.termrank.query import QueryMatch, parse_record_count, query_products

__all__ = [
    "TermScore",
    "distinctiveness",
    "relevance",
    "saliency",
    "term_probs",
    "topic_given_word",
    "topic_probs",
    "top_salient_terms",
    "QueryMatch",
    "parse_record_count",
    "query_products",
]
