from shopminer.lda.model import (
    LdaHyperparams,
    LdaModel,
    collapsed_conditional,
    dominant_topic,
    dominant_topic_counts,
    estimate_phi,
    estimate_theta,
    load_model,
    save_model,
    train,
)
from shopminer.lda.kernel import BACKEND

__all__ = [
    "BACKEND",
    "LdaHyperparams",
    "LdaModel",
    "collapsed_conditional",
    "dominant_topic",
    "dominant_topic_counts",
    "estimate_phi",
    "estimate_theta",
    "load_model",
    "save_model",
    "train",
]
