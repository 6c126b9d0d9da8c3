"""Shared fixtures and independent oracles.

The oracles here (naive window enumeration, brute-force collapsed posterior)
deliberately re-implement things the production code computes by other
means; keep them simple and do not import production internals into them.
"""

from __future__ import annotations

import math
from collections import Counter
from itertools import combinations, product
from pathlib import Path

import numpy as np
import pytest

from shopminer.corpus.builder import Document, EncodedCorpus, Vocabulary

FIXTURES = Path(__file__).parent / "fixtures"
FORUM_STORE = FIXTURES / "forum_store"


@pytest.fixture
def forum_store() -> Path:
    return FORUM_STORE


def make_vocab(n_terms: int) -> Vocabulary:
    return Vocabulary([f"w{i:03d}" for i in range(n_terms)], [1] * n_terms)


def make_corpus(doc_token_ids: list[list[int]], n_terms: int) -> EncodedCorpus:
    docs = [(f"shop{d}", list(ids)) for d, ids in enumerate(doc_token_ids)]
    return EncodedCorpus(documents=docs, vocabulary=make_vocab(n_terms))


def random_corpus(rng: np.random.Generator, max_docs=6, max_len=12, max_terms=8):
    n_terms = int(rng.integers(2, max_terms + 1))
    n_docs = int(rng.integers(1, max_docs + 1))
    docs = []
    for _ in range(n_docs):
        length = int(rng.integers(1, max_len + 1))
        docs.append([int(t) for t in rng.integers(0, n_terms, size=length)])
    return make_corpus(docs, n_terms)


# ---------------------------------------------------------------------------
# Oracle: naive boolean sliding-window counting (per-window set enumeration)
# ---------------------------------------------------------------------------

def naive_window_counts(docs, width: int):
    total = 0
    occurrence: Counter = Counter()
    co: Counter = Counter()
    for doc in docs:
        if len(doc) == 0:
            continue
        for start in range(max(1, len(doc) - width + 1)):
            window = set(doc[start : start + width])
            total += 1
            for token in window:
                occurrence[token] += 1
            for a, b in combinations(sorted(window), 2):
                co[(a, b)] += 1
    return total, occurrence, co


def naive_npmi(occ1: int, occ2: int, co12: int, total: int, eps: float = 1e-12) -> float:
    if total == 0:
        return 0.0
    p1, p2, p12 = occ1 / total, occ2 / total, co12 / total
    if p1 * p2 == 0.0:
        return 0.0
    den = -math.log(p12 + eps)
    if den <= 0.0:
        return 1.0
    return min(1.0, max(-1.0, math.log((p12 + eps) / (p1 * p2)) / den))


def naive_cv(phi, docs, width: int, top_n: int):
    """Straight-line C_v: explicit loops, no shared code with production."""
    total, occurrence, co = naive_window_counts(docs, width)

    def pair_npmi(a, b):
        joint = occurrence[a] if a == b else co[(min(a, b), max(a, b))]
        return naive_npmi(occurrence[a], occurrence[b], joint, total)

    per_topic = []
    for row in phi:
        ranked = sorted(range(len(row)), key=lambda w: (-row[w], w))[:top_n]
        vectors = [[pair_npmi(wi, wj) for wj in ranked] for wi in ranked]
        set_vec = [sum(v[j] for v in vectors) for j in range(top_n)]
        sims = []
        for vec in vectors:
            dot = sum(x * y for x, y in zip(vec, set_vec))
            na = math.sqrt(sum(x * x for x in vec))
            nb = math.sqrt(sum(y * y for y in set_vec))
            sims.append(0.0 if na == 0.0 or nb == 0.0 else dot / (na * nb))
        per_topic.append(sum(sims) / len(sims))
    return sum(per_topic) / len(per_topic), per_topic


# ---------------------------------------------------------------------------
# Oracle: exact collapsed posterior over all k^N assignments
# ---------------------------------------------------------------------------

def brute_force_posterior(doc_of_token, word_of_token, k, n_terms, alpha, beta):
    """P(z | w) by enumeration; returns dict assignment-tuple -> probability."""
    from math import lgamma

    n_tokens = len(doc_of_token)
    n_docs = max(doc_of_token) + 1
    log_weights = {}
    for z in product(range(k), repeat=n_tokens):
        n_dk = [[0] * k for _ in range(n_docs)]
        n_kw = [[0] * n_terms for _ in range(k)]
        n_k = [0] * k
        for i, t in enumerate(z):
            n_dk[doc_of_token[i]][t] += 1
            n_kw[t][word_of_token[i]] += 1
            n_k[t] += 1
        lw = 0.0
        for d in range(n_docs):
            for t in range(k):
                lw += lgamma(n_dk[d][t] + alpha) - lgamma(alpha)
        for t in range(k):
            lw -= lgamma(n_k[t] + n_terms * beta) - lgamma(n_terms * beta)
            for w in range(n_terms):
                lw += lgamma(n_kw[t][w] + beta) - lgamma(beta)
        log_weights[z] = lw
    peak = max(log_weights.values())
    weights = {z: math.exp(lw - peak) for z, lw in log_weights.items()}
    norm = sum(weights.values())
    return {z: w / norm for z, w in weights.items()}


def planted_corpus(master_seed: int, n_topics=4, words_per_topic=25, n_docs=200, doc_len=50):
    """Disjoint-vocabulary planted-topic corpus; doc d belongs to topic d % n_topics."""
    rng = np.random.default_rng(master_seed)
    docs = []
    for d in range(n_docs):
        g = d % n_topics
        lo, hi = g * words_per_topic, (g + 1) * words_per_topic
        docs.append([int(t) for t in rng.integers(lo, hi, size=doc_len)])
    return make_corpus(docs, n_topics * words_per_topic)
