"""C_v topic coherence and topic-count selection.

Score construction: per topic take the top-n words by phi, build NPMI context
vectors against that word set, then compare each word's vector to the summed
set vector by cosine (one-set segmentation).  The per-topic score is the mean
cosine, the model score the mean over topics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from shopminer.coherence.windows import WindowStats, build_window_stats
from shopminer.errors import ConfigurationError, ShopminerError
from shopminer.lda.model import LdaHyperparams, LdaModel, estimate_phi, train
from shopminer.rng import derive_seed


class SweepTrainingError(ShopminerError):
    def __init__(self, k: int, cause: Exception):
        super().__init__(f"training failed for k={k}: {cause}")
        self.k = k


def npmi(w1, w2, stats: WindowStats, epsilon: float = 1e-12) -> float:
    """Normalized PMI in [-1, 1].

    Conventions: no evidence (zero marginals or zero total) -> 0; joint
    probability 1 -> 1 (clamped past the vanishing denominator).
    """
    total = stats.total_windows
    if total == 0:
        return 0.0
    p1 = stats.occ(w1) / total
    p2 = stats.occ(w2) / total
    marginal = p1 * p2
    if marginal == 0.0:
        return 0.0
    p12 = stats.co(w1, w2) / total
    denominator = -math.log(p12 + epsilon)
    if denominator <= 0.0:
        return 1.0
    value = math.log((p12 + epsilon) / marginal) / denominator
    return min(1.0, max(-1.0, value))


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity; 0 when either vector is zero."""
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


def topic_top_words(phi_row: np.ndarray, top_n: int) -> list[int]:
    """Ids of the top_n highest-phi words, ties broken by lower word id."""
    order = np.lexsort((np.arange(len(phi_row)), -phi_row))
    return [int(i) for i in order[:top_n]]


def score_topics(
    phi: np.ndarray, stats: WindowStats, top_n: int
) -> tuple[float, list[float]]:
    """(overall C_v, per-topic scores) for a topic-word matrix."""
    if top_n < 2:
        raise ConfigurationError(f"top_n must be >= 2, got {top_n}")
    if top_n > phi.shape[1]:
        raise ConfigurationError(
            f"top_n={top_n} exceeds vocabulary size {phi.shape[1]}"
        )
    per_topic = []
    for row in phi:
        words = topic_top_words(row, top_n)
        context = np.array(
            [[npmi(wi, wj, stats) for wj in words] for wi in words]
        )
        set_vector = context.sum(axis=0)
        sims = [cosine(context[i], set_vector) for i in range(top_n)]
        per_topic.append(float(np.mean(sims)))
    return float(np.mean(per_topic)), per_topic


def cv_score(
    model: LdaModel, stats: WindowStats, top_n: int = 20
) -> tuple[float, list[float]]:
    return score_topics(estimate_phi(model), stats, top_n)


@dataclass
class CoherenceReport:
    window_width: int
    top_n: int
    master_seed: int
    scores: dict[int, float] = field(default_factory=dict)
    per_topic: dict[int, list[float]] = field(default_factory=dict)
    seeds: dict[int, int] = field(default_factory=dict)

    @property
    def best_k(self) -> int:
        # argmax score; ties resolve to the smaller k
        return min(self.scores, key=lambda k: (-self.scores[k], k))

    def to_rows(self) -> list[tuple[int, float]]:
        return sorted(self.scores.items())


def select_k(
    corpus,
    k_values: list[int],
    hp_template: LdaHyperparams,
    stats: WindowStats | None = None,
    top_n: int = 20,
) -> CoherenceReport:
    """Train one model per k and score each; hp_template.seed is the master
    seed from which per-k seeds are derived (order-independent)."""
    if not k_values:
        raise ConfigurationError("k_values must be non-empty")
    if stats is None:
        stats = build_window_stats((ids for _, ids in corpus.documents), 110)
    report = CoherenceReport(
        window_width=stats.window_width, top_n=top_n, master_seed=hp_template.seed
    )
    for k in k_values:
        seed = derive_seed(hp_template.seed, k)
        hp = LdaHyperparams(
            k=k,
            alpha=hp_template.alpha,
            beta=hp_template.beta,
            iterations=hp_template.iterations,
            seed=seed,
            average_samples=hp_template.average_samples,
        )
        try:
            model = train(corpus, hp)
            overall, per_topic = cv_score(model, stats, top_n)
        except ShopminerError as exc:
            raise SweepTrainingError(k, exc) from exc
        report.scores[k] = overall
        report.per_topic[k] = per_topic
        report.seeds[k] = seed
    return report
