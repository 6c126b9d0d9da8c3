from shopminer.corpus.tokenizer import DEFAULT_STOPWORDS, TokenizerConfig, tokenize
from shopminer.corpus.builder import (
    Document,
    DocumentBuild,
    EncodedCorpus,
    Vocabulary,
    build_documents,
    build_vocabulary,
    encode,
)

__all__ = [
    "DEFAULT_STOPWORDS",
    "TokenizerConfig",
    "tokenize",
    "Document",
    "DocumentBuild",
    "EncodedCorpus",
    "Vocabulary",
    "build_documents",
    "build_vocabulary",
    "encode",
]
