"""LDA training state and estimators.

Training is collapsed Gibbs sampling with symmetric priors.  The default
estimator uses the final sample; optionally the last ``average_samples``
sweeps are averaged (chunked kernel calls, same rng stream either way).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from shopminer.corpus.builder import EncodedCorpus, Vocabulary
from shopminer.errors import ConfigurationError, DataError
from shopminer.lda import kernel

MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class LdaHyperparams:
    k: int
    alpha: float | None = None  # None -> 5/k
    beta: float = 0.01
    iterations: int = 1000
    seed: int = 0
    average_samples: int = 0  # 0 -> final-sample estimation

    def __post_init__(self):
        if self.k < 2:
            raise ConfigurationError(f"k must be >= 2, got {self.k}")
        if self.alpha is not None and self.alpha <= 0:
            raise ConfigurationError("alpha must be positive")
        if self.beta <= 0:
            raise ConfigurationError("beta must be positive")
        if self.iterations < 1:
            raise ConfigurationError("iterations must be >= 1")
        if self.average_samples < 0 or self.average_samples > self.iterations:
            raise ConfigurationError("average_samples must be in [0, iterations]")

    @property
    def alpha_value(self) -> float:
        return 5.0 / self.k if self.alpha is None else self.alpha


@dataclass
class LdaModel:
    hyperparams: LdaHyperparams
    vocabulary: Vocabulary
    doc_handles: list[str]
    doc_ids: np.ndarray  # int32, one entry per token
    word_ids: np.ndarray  # int32
    z: np.ndarray  # int32 topic assignment per token
    n_dk: np.ndarray  # int64 (D, k)
    n_kw: np.ndarray  # int64 (k, V)
    n_k: np.ndarray  # int64 (k,)
    phi_avg: np.ndarray | None = field(default=None)
    theta_avg: np.ndarray | None = field(default=None)

    @property
    def k(self) -> int:
        return self.hyperparams.k

    @property
    def n_tokens(self) -> int:
        return len(self.z)

    def term_counts(self) -> np.ndarray:
        return np.bincount(self.word_ids, minlength=len(self.vocabulary)).astype(np.int64)

    def recount(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Recompute all count matrices from z (consistency checking)."""
        return _tally(self.doc_ids, self.word_ids, self.z, len(self.doc_handles),
                      self.k, len(self.vocabulary))


def _tally(doc_ids, word_ids, z, n_docs, k, n_terms):
    n_dk = np.zeros((n_docs, k), dtype=np.int64)
    n_kw = np.zeros((k, n_terms), dtype=np.int64)
    np.add.at(n_dk, (doc_ids, z), 1)
    np.add.at(n_kw, (z, word_ids), 1)
    n_k = np.bincount(z, minlength=k).astype(np.int64)
    return n_dk, n_kw, n_k


def collapsed_conditional(n_dk_row, n_kw_col, n_k, alpha, beta, n_terms) -> np.ndarray:
    """Unnormalized collapsed conditional over topics for one held-out token.

    All count arguments must already exclude the token being resampled.
    """
    n_dk_row = np.asarray(n_dk_row, dtype=np.float64)
    n_kw_col = np.asarray(n_kw_col, dtype=np.float64)
    n_k = np.asarray(n_k, dtype=np.float64)
    return (n_dk_row + alpha) * (n_kw_col + beta) / (n_k + n_terms * beta)


def train(corpus: EncodedCorpus, hp: LdaHyperparams) -> LdaModel:
    """Collapsed Gibbs training; deterministic in (corpus, hp)."""
    if not corpus.documents:
        raise ConfigurationError("cannot train on an empty corpus")
    n_terms = len(corpus.vocabulary)
    if n_terms < 2:
        raise ConfigurationError(f"vocabulary too small to train (V={n_terms})")

    doc_ids = np.concatenate(
        [np.full(len(ids), d, dtype=np.int32) for d, (_, ids) in enumerate(corpus.documents)]
    )
    word_ids = np.concatenate(
        [np.asarray(ids, dtype=np.int32) for _, ids in corpus.documents]
    )
    n_tokens = len(word_ids)
    if hp.k >= n_tokens:
        raise ConfigurationError(
            f"k={hp.k} is degenerate for a corpus of {n_tokens} tokens"
        )

    z, state = kernel.init_assignments(n_tokens, hp.k, hp.seed)
    n_dk, n_kw, n_k = _tally(doc_ids, word_ids, z, len(corpus.documents), hp.k, n_terms)

    alpha, beta = hp.alpha_value, hp.beta
    phi_avg = theta_avg = None
    if hp.average_samples == 0:
        kernel.run_sweeps(doc_ids, word_ids, z, n_dk, n_kw, n_k,
                          alpha, beta, hp.iterations, state)
    else:
        burn = hp.iterations - hp.average_samples
        if burn > 0:
            state = kernel.run_sweeps(doc_ids, word_ids, z, n_dk, n_kw, n_k,
                                      alpha, beta, burn, state)
        phi_sum = np.zeros((hp.k, n_terms))
        theta_sum = np.zeros((len(corpus.documents), hp.k))
        for _ in range(hp.average_samples):
            state = kernel.run_sweeps(doc_ids, word_ids, z, n_dk, n_kw, n_k,
                                      alpha, beta, 1, state)
            phi_sum += _phi_from_counts(n_kw, n_k, beta)
            theta_sum += _theta_from_counts(n_dk, alpha)
        phi_avg = phi_sum / hp.average_samples
        theta_avg = theta_sum / hp.average_samples

    return LdaModel(
        hyperparams=hp,
        vocabulary=corpus.vocabulary,
        doc_handles=[h for h, _ in corpus.documents],
        doc_ids=doc_ids,
        word_ids=word_ids,
        z=z,
        n_dk=n_dk,
        n_kw=n_kw,
        n_k=n_k,
        phi_avg=phi_avg,
        theta_avg=theta_avg,
    )


def _phi_from_counts(n_kw, n_k, beta) -> np.ndarray:
    n_terms = n_kw.shape[1]
    return (n_kw + beta) / (n_k[:, None] + n_terms * beta)


def _theta_from_counts(n_dk, alpha) -> np.ndarray:
    k = n_dk.shape[1]
    doc_len = n_dk.sum(axis=1, keepdims=True)
    return (n_dk + alpha) / (doc_len + k * alpha)


def estimate_phi(model: LdaModel) -> np.ndarray:
    """Topic-word distributions, rows summing to 1, strictly positive."""
    if model.phi_avg is not None:
        return model.phi_avg
    return _phi_from_counts(model.n_kw, model.n_k, model.hyperparams.beta)


def estimate_theta(model: LdaModel) -> np.ndarray:
    """Document-topic distributions, rows summing to 1, strictly positive."""
    if model.theta_avg is not None:
        return model.theta_avg
    return _theta_from_counts(model.n_dk, model.hyperparams.alpha_value)


def dominant_topic(theta_row) -> int:
    """Argmax topic; ties resolve to the lowest index."""
    return int(np.argmax(theta_row))


def dominant_topic_counts(theta) -> np.ndarray:
    """Number of documents per topic where that topic is dominant."""
    return np.bincount(np.argmax(theta, axis=1), minlength=theta.shape[1])


def save_model(model: LdaModel, path) -> None:
    """Self-contained versioned dump; reload reproduces phi/theta bit-exactly."""
    header = {
        "format_version": MODEL_FORMAT_VERSION,
        "hyperparams": {
            "k": model.hyperparams.k,
            "alpha": model.hyperparams.alpha,
            "beta": model.hyperparams.beta,
            "iterations": model.hyperparams.iterations,
            "seed": model.hyperparams.seed,
            "average_samples": model.hyperparams.average_samples,
        },
        "vocab_sha256": model.vocabulary.sha256(),
        "averaged": model.phi_avg is not None,
    }
    arrays = {
        "header": np.frombuffer(json.dumps(header, sort_keys=True).encode("utf-8"), dtype=np.uint8),
        "terms": np.array(model.vocabulary.term_by_id),
        "term_df": np.asarray(model.vocabulary.document_frequency, dtype=np.int64),
        "doc_handles": np.array(model.doc_handles),
        "doc_ids": model.doc_ids,
        "word_ids": model.word_ids,
        "z": model.z,
        "n_dk": model.n_dk,
        "n_kw": model.n_kw,
        "n_k": model.n_k,
    }
    if model.phi_avg is not None:
        arrays["phi_avg"] = model.phi_avg
        arrays["theta_avg"] = model.theta_avg
    with open(path, "wb") as fh:
        np.savez_compressed(fh, **arrays)


def load_model(path) -> LdaModel:
    with np.load(path, allow_pickle=False) as data:
        header = json.loads(bytes(data["header"]).decode("utf-8"))
        if header.get("format_version") != MODEL_FORMAT_VERSION:
            raise DataError(
                f"unsupported model format {header.get('format_version')!r}", context=str(path)
            )
        vocab = Vocabulary(list(data["terms"]), [int(x) for x in data["term_df"]])
        if vocab.sha256() != header["vocab_sha256"]:
            raise DataError("vocabulary hash mismatch in model file", context=str(path))
        hp = LdaHyperparams(**header["hyperparams"])
        return LdaModel(
            hyperparams=hp,
            vocabulary=vocab,
            doc_handles=[str(h) for h in data["doc_handles"]],
            doc_ids=data["doc_ids"],
            word_ids=data["word_ids"],
            z=data["z"],
            n_dk=data["n_dk"],
            n_kw=data["n_kw"],
            n_k=data["n_k"],
            phi_avg=data["phi_avg"] if header["averaged"] else None,
            theta_avg=data["theta_avg"] if header["averaged"] else None,
        )
