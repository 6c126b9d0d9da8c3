"""Document construction, vocabulary filtering and integer encoding.

One document per shop: the concatenation of its product titles in listing
order, tokenized.  Word order is discarded downstream (bag of words), but the
encoded corpus preserves token order so decoding round-trips.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from shopminer.corpus.tokenizer import TokenizerConfig, tokenize
from shopminer.errors import ConfigurationError, DataError


@dataclass
class Document:
    shop_handle: str
    tokens: list[str]


@dataclass
class DocumentBuild:
    documents: list[Document]
    dropped_empty: list[str]  # handles of shops whose document tokenized to nothing


class Vocabulary:
    """Dense term<->id mapping with per-term document frequency.

    Ids are assigned by descending document frequency, ties broken by
    lexicographic term order, so the mapping is a pure function of the input
    documents.
    """

    def __init__(self, terms: Sequence[str], document_frequency: Sequence[int]):
        if len(terms) != len(document_frequency):
            raise ValueError("terms and document_frequency length mismatch")
        self.term_by_id: list[str] = list(terms)
        self.document_frequency: list[int] = list(document_frequency)
        self.id_by_term: dict[str, int] = {t: i for i, t in enumerate(self.term_by_id)}
        if len(self.id_by_term) != len(self.term_by_id):
            raise ValueError("duplicate terms in vocabulary")

    def __len__(self) -> int:
        return len(self.term_by_id)

    def __contains__(self, term: str) -> bool:
        return term in self.id_by_term

    def id_of(self, term: str) -> int:
        return self.id_by_term[term]

    def term_of(self, term_id: int) -> str:
        return self.term_by_id[term_id]

    def sha256(self) -> str:
        """Content hash used to tie serialized models to their vocabulary."""
        h = hashlib.sha256()
        for term, df in zip(self.term_by_id, self.document_frequency):
            h.update(f"{term}\t{df}\n".encode("utf-8"))
        return h.hexdigest()

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for i, (term, df) in enumerate(zip(self.term_by_id, self.document_frequency)):
                fh.write(f"{i}\t{term}\t{df}\n")

    @classmethod
    def load(cls, path) -> "Vocabulary":
        terms, dfs = [], []
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                parts = line.rstrip("\n").split("\t")
                if len(parts) != 3:
                    raise DataError("expected 'id<TAB>term<TAB>df'", context=f"{path}:{lineno}")
                idx, term, df = parts
                if int(idx) != len(terms):
                    raise DataError("non-dense vocabulary ids", context=f"{path}:{lineno}")
                terms.append(term)
                dfs.append(int(df))
        return cls(terms, dfs)


@dataclass
class EncodedCorpus:
    documents: list[tuple[str, list[int]]]  # (shop_handle, term ids)
    vocabulary: Vocabulary
    dropped_oov: list[str] = field(default_factory=list)

    @property
    def n_tokens(self) -> int:
        return sum(len(ids) for _, ids in self.documents)

    def decode(self, doc_index: int) -> list[str]:
        _, ids = self.documents[doc_index]
        return [self.vocabulary.term_of(i) for i in ids]

    def save(self, doc_path) -> None:
        with open(doc_path, "w", encoding="utf-8") as fh:
            for handle, ids in self.documents:
                fh.write(handle + " " + " ".join(str(i) for i in ids) + "\n")

    @classmethod
    def load(cls, doc_path, vocabulary: Vocabulary) -> "EncodedCorpus":
        docs = []
        with open(doc_path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                parts = line.split()
                if len(parts) < 2:
                    raise DataError(
                        "corpus line needs a handle and at least one term id",
                        context=f"{doc_path}:{lineno}",
                    )
                handle, ids = parts[0], [int(p) for p in parts[1:]]
                bad = [i for i in ids if i >= len(vocabulary)]
                if bad:
                    raise DataError(f"term id {bad[0]} out of range", context=f"{doc_path}:{lineno}")
                docs.append((handle, ids))
        return cls(documents=docs, vocabulary=vocabulary)


def build_documents(dataset, config: TokenizerConfig = TokenizerConfig()) -> DocumentBuild:
    """One document per shop from its concatenated product titles.

    Shops that tokenize to nothing are excluded from training but reported in
    ``dropped_empty`` so harvest/report stages can account for them.
    """
    documents, dropped = [], []
    for shop in dataset:
        text = " ".join(p.title for p in shop.products)
        tokens = tokenize(text, config)
        if tokens:
            documents.append(Document(shop_handle=shop.handle, tokens=tokens))
        else:
            dropped.append(shop.handle)
    return DocumentBuild(documents=documents, dropped_empty=dropped)


def build_vocabulary(
    docs: Sequence[Document], min_df: int = 2, max_df_ratio: float = 0.5
) -> Vocabulary:
    """Retain terms with min_df <= df <= max_df_ratio * |docs|."""
    if not docs:
        raise ConfigurationError("cannot build a vocabulary from zero documents")
    df = Counter()
    for doc in docs:
        df.update(set(doc.tokens))
    ceiling = max_df_ratio * len(docs)
    kept = [(term, count) for term, count in df.items() if min_df <= count <= ceiling]
    if not kept:
        raise ConfigurationError(
            f"vocabulary empty after df filtering (min_df={min_df}, "
            f"max_df_ratio={max_df_ratio}, {len(docs)} docs)"
        )
    kept.sort(key=lambda tc: (-tc[1], tc[0]))
    return Vocabulary([t for t, _ in kept], [c for _, c in kept])


def encode(docs: Sequence[Document], vocab: Vocabulary) -> EncodedCorpus:
    """Replace tokens by ids, dropping OOV tokens and then-empty documents."""
    encoded, dropped = [], []
    for doc in docs:
        ids = [vocab.id_by_term[t] for t in doc.tokens if t in vocab.id_by_term]
        if ids:
            encoded.append((doc.shop_handle, ids))
        else:
            dropped.append(doc.shop_handle)
    return EncodedCorpus(documents=encoded, vocabulary=vocab, dropped_oov=dropped)
