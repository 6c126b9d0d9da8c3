from shopminer.coherence.windows import WindowStats, build_window_stats
from shopminer.coherence.cv import (
    CoherenceReport,
    SweepTrainingError,
    cosine,
    cv_score,
    npmi,
    score_topics,
    select_k,
    topic_top_words,
)

__all__ = [
    "WindowStats",
    "build_window_stats",
    "CoherenceReport",
    "SweepTrainingError",
    "cosine",
    "cv_score",
    "npmi",
    "score_topics",
    "select_k",
    "topic_top_words",
]
