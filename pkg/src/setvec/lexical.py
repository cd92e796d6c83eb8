"""Text to sparse vectors without a neural encoder: raw TF and Okapi BM25.

BM25 impact weights are placed on the *document* side, so that
``dot(encode_tf(query), encode_bm25_doc(doc))`` reproduces the classic
query-document BM25 score.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import CorpusStatsError
from .sparse import SparseVector, Vocabulary

# Runs of word characters, minus the underscore; splits on any Unicode
# whitespace or punctuation.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

DEFAULT_K1 = 0.9
DEFAULT_B = 0.4


def tokenize(text: str) -> list[str]:
    """Lowercase and split on Unicode whitespace/punctuation."""
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class CorpusStats:
    """Global statistics needed for BM25 weighting, frozen after the build pass."""

    vocab: Vocabulary
    doc_count: int
    doc_freq: Mapping[int, int]
    avg_doc_len: float


def corpus_stats(token_docs: Iterable[Sequence[str]], vocab: Vocabulary) -> CorpusStats:
    """Collect document frequencies and average length over tokenized docs."""
    doc_freq: dict[int, int] = {}
    doc_count = 0
    total_len = 0
    for tokens in token_docs:
        doc_count += 1
        total_len += len(tokens)
        for term in set(tokens):
            tid = vocab.add(term)
            doc_freq[tid] = doc_freq.get(tid, 0) + 1
    avg_doc_len = total_len / doc_count if doc_count else 0.0
    return CorpusStats(vocab=vocab, doc_count=doc_count, doc_freq=doc_freq, avg_doc_len=avg_doc_len)


def encode_tf(tokens: Sequence[str], vocab: Vocabulary) -> SparseVector:
    """Raw term-frequency vector (weight = token multiplicity)."""
    counts = Counter(tokens)
    return SparseVector.from_pairs(
        ((term, float(tf)) for term, tf in counts.items()), vocab
    )


def bm25_idf(doc_count: int, df: int) -> float:
    """Lucene-style nonnegative idf: ``ln(1 + (N - df + 0.5) / (df + 0.5))``."""
    return math.log(1.0 + (doc_count - df + 0.5) / (df + 0.5))


def encode_bm25_doc(
    tokens: Sequence[str],
    stats: CorpusStats,
    k1: float = DEFAULT_K1,
    b: float = DEFAULT_B,
) -> SparseVector:
    """Okapi BM25 impact vector for one document.

    weight(t) = idf(t) * tf * (k1 + 1) / (tf + k1 * (1 - b + b * dl/avgdl))

    Every token must have a document frequency in *stats* (the stats must
    have been built over a corpus containing this document).
    """
    if k1 < 0.0:
        raise ValueError("k1 must be nonnegative")
    if not 0.0 <= b <= 1.0:
        raise ValueError("b must be in [0, 1]")
    counts = Counter(tokens)
    if not counts:
        return SparseVector.empty(stats.vocab)
    dl = len(tokens)
    length_norm = k1 * (1.0 - b + b * dl / stats.avg_doc_len)
    ids = []
    weights = []
    for term, tf in counts.items():
        tid = stats.vocab.get(term)
        df = stats.doc_freq.get(tid, 0) if tid is not None else 0
        if df <= 0:
            raise CorpusStatsError(
                f"token {term!r} has no document frequency; stats were built on a different corpus"
            )
        idf = bm25_idf(stats.doc_count, df)
        ids.append(tid)
        weights.append(idf * tf * (k1 + 1.0) / (tf + length_norm))
    return SparseVector(ids, weights, stats.vocab)
