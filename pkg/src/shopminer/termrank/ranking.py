"""Term ranking within and across topics.

Two rankings serve two jobs: relevance (frequency/exclusivity trade-off at a
lambda weight) orders the key terms that describe a topic; saliency (term
probability times the KL divergence of its topic posterior from the topic
marginal) picks the terms that most sharply discriminate topics, used to
build search queries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from shopminer.lda.model import LdaModel, estimate_phi


@dataclass
class TermScore:
    term: str
    score: float
    rank: int  # dense, from 1, descending score
    topic: int | None = None


def _ranked(scores: np.ndarray, vocab, topic=None) -> list[TermScore]:
    order = np.lexsort((np.arange(len(scores)), -scores))
    return [
        TermScore(term=vocab.term_of(int(w)), score=float(scores[w]), rank=r + 1, topic=topic)
        for r, w in enumerate(order)
    ]


def term_probs(model: LdaModel) -> np.ndarray:
    """p(w): empirical corpus term frequencies (strictly positive)."""
    counts = model.term_counts()
    return counts / counts.sum()


def topic_probs(model: LdaModel) -> np.ndarray:
    """p(k): global token-assignment mass per topic."""
    return model.n_k / model.n_k.sum()


def relevance(
    phi: np.ndarray, corpus_term_probs: np.ndarray, topic: int, lam: float, vocab
) -> list[TermScore]:
    """lam*log(phi) + (1-lam)*log(phi/p_w), all terms ranked descending."""
    row = phi[topic]
    scores = lam * np.log(row) + (1.0 - lam) * np.log(row / corpus_term_probs)
    return _ranked(scores, vocab, topic=topic)


def topic_given_word(phi: np.ndarray, p_k: np.ndarray) -> np.ndarray:
    """p(k|w) matrix of shape (V, k) via Bayes over phi and p(k)."""
    joint = phi.T * p_k  # (V, k)
    return joint / joint.sum(axis=1, keepdims=True)


def distinctiveness(phi: np.ndarray, p_k: np.ndarray) -> np.ndarray:
    """KL(p(k|w) || p(k)) per word."""
    pkw = topic_given_word(phi, p_k)
    ratio = np.divide(pkw, p_k, out=np.ones_like(pkw), where=pkw > 0)
    terms = np.where(pkw > 0, pkw * np.log(ratio), 0.0)
    return terms.sum(axis=1)


def saliency(
    phi: np.ndarray, p_k: np.ndarray, corpus_term_probs: np.ndarray, vocab
) -> list[TermScore]:
    """p(w) * distinctiveness(w), corpus-wide, ranked descending."""
    scores = corpus_term_probs * distinctiveness(phi, p_k)
    return _ranked(scores, vocab)


def top_salient_terms(model: LdaModel, topic: int, n: int) -> list[str]:
    """Top-n salient terms among words whose most likely topic is ``topic``."""
    if n <= 0:
        return []
    phi = estimate_phi(model)
    p_k = topic_probs(model)
    p_w = term_probs(model)
    owner = np.argmax(topic_given_word(phi, p_k), axis=1)
    ranked = saliency(phi, p_k, p_w, model.vocabulary)
    picked = [
        ts.term
        for ts in ranked
        if owner[model.vocabulary.id_of(ts.term)] == topic
    ]
    return picked[:n]
