"""Exact top-k retrieval over sparse vectors via an inverted index.

Scoring is term-at-a-time accumulation with a full accumulator table and no
pruning: upper-bound tricks are unsound once query or document weights can be
negative, and exactness is the contract here.  A document is returned iff at
least one query term touches it, even when its accumulated score is zero or
negative; ties break by ascending internal doc id (ingestion order).

The on-disk format is little-endian binary: magic, format version, the
vocabulary, the doc-name table, per-term posting lists with varint
delta-encoded doc ids and raw 8-byte weights, and a trailing CRC32 checksum.
"""

from __future__ import annotations

import struct
import zlib
from typing import Iterable, Iterator

import numpy as np

from .errors import (
    CptDomainError,
    DuplicateDocError,
    IndexFormatError,
    VocabularyMismatchError,
)
from .sparse import SparseVector, Vocabulary, maxpool

MAGIC = b"SVIX"
FORMAT_VERSION = 1

# Ranked (doc name, score) pairs, best first.
SearchResult = list[tuple[str, float]]


class InvertedIndex:
    """Immutable posting-list index over a fixed document collection."""

    __slots__ = ("vocab", "doc_names", "_postings")

    def __init__(
        self,
        vocab: Vocabulary,
        doc_names: list[str],
        postings: dict[int, tuple[np.ndarray, np.ndarray]],
    ):
        self.vocab = vocab
        self.doc_names = doc_names
        self._postings = postings

    @property
    def doc_count(self) -> int:
        return len(self.doc_names)

    @property
    def term_count(self) -> int:
        return len(self._postings)

    def postings(self, term_id: int) -> tuple[np.ndarray, np.ndarray] | None:
        """(doc ids, weights) for a term, or None when the term indexes nothing."""
        return self._postings.get(int(term_id))

    def __repr__(self) -> str:
        return f"InvertedIndex({self.doc_count} docs, {self.term_count} posted terms)"


def build(
    docs: Iterable[tuple[str, SparseVector]], vocab: Vocabulary | None = None
) -> InvertedIndex:
    """Ingest (doc name, vector) pairs; names must be unique.

    *vocab* may be given explicitly (required for an empty stream); otherwise
    it is taken from the first vector, and every vector must share it.
    """
    doc_names: list[str] = []
    seen: set[str] = set()
    lists: dict[int, tuple[list[int], list[float]]] = {}
    for name, vec in docs:
        if vocab is None:
            vocab = vec.vocab
        elif vec.vocab is not vocab:
            raise VocabularyMismatchError(f"document {name!r} uses a different vocabulary")
        if name in seen:
            raise DuplicateDocError(f"duplicate document name {name!r}")
        seen.add(name)
        doc_id = len(doc_names)
        doc_names.append(name)
        for tid, w in zip(vec.ids.tolist(), vec.weights.tolist()):
            slot = lists.get(tid)
            if slot is None:
                slot = ([], [])
                lists[tid] = slot
            slot[0].append(doc_id)
            slot[1].append(w)
    if vocab is None:
        vocab = Vocabulary()
    postings = {
        tid: (
            np.asarray(ids, dtype=np.uint32),
            np.asarray(ws, dtype=np.float64),
        )
        for tid, (ids, ws) in sorted(lists.items())
    }
    return InvertedIndex(vocab, doc_names, postings)


def _search_ids(idx: InvertedIndex, q: SparseVector, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Top-k (doc ids, scores); internal, shared by search and search_cpt."""
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise ValueError("k must be a positive integer")
    if q.vocab is not idx.vocab:
        raise VocabularyMismatchError("query vocabulary does not match the index")
    n = idx.doc_count
    scores = np.zeros(n, dtype=np.float64)
    touched = np.zeros(n, dtype=bool)
    for tid, qw in zip(q.ids.tolist(), q.weights.tolist()):
        posting = idx._postings.get(tid)
        if posting is None:
            continue
        doc_ids, weights = posting
        scores[doc_ids] += qw * weights
        touched[doc_ids] = True
    candidates = np.nonzero(touched)[0]
    if candidates.size == 0:
        return candidates, np.empty(0, dtype=np.float64)
    order = np.lexsort((candidates, -scores[candidates]))[:k]
    top = candidates[order]
    return top, scores[top]


def search(idx: InvertedIndex, q: SparseVector, k: int) -> SearchResult:
    """Exact top-k by dot product; touched zero/negative scores are kept."""
    doc_ids, scores = _search_ids(idx, q, k)
    return [(idx.doc_names[d], float(s)) for d, s in zip(doc_ids, scores)]


def search_cpt(
    idx: InvertedIndex,
    q_cpt,
    a: SparseVector,
    b: SparseVector,
    k: int,
    candidate_pool: int,
) -> SearchResult:
    """Two-stage pseudo-term retrieval.

    Stage 1 pulls *candidate_pool* docs with ``maxpool(a, b)`` over the
    standard index; stage 2 rescores them with the factorized pseudo-term
    score, reading only the posting lists of the expansion's own terms (the
    document side is never materialized).  With a pool at least the corpus
    size this is exhaustive.
    """
    if not isinstance(candidate_pool, (int, np.integer)) or candidate_pool < 1:
        raise ValueError("candidate_pool must be a positive integer")
    if q_cpt.nnz == 0 or a.nnz == 0 or b.nnz == 0:
        return []
    cand_ids, _ = _search_ids(idx, maxpool(a, b), candidate_pool)
    if cand_ids.size == 0:
        return []
    a_ids, b_ids = q_cpt.side_ids()
    sqrt_a = _sqrt_factor(idx, a, a_ids)
    sqrt_b = _sqrt_factor(idx, b, b_ids)
    scores = sqrt_a[cand_ids] * sqrt_b[cand_ids]
    order = np.lexsort((cand_ids, -scores))[:k]
    return [(idx.doc_names[int(cand_ids[i])], float(scores[i])) for i in order]


def _sqrt_factor(idx: InvertedIndex, side: SparseVector, side_ids: list[int]) -> np.ndarray:
    """Per-doc ``sum_i sqrt(w_i * d_i)`` over one side's expansion terms."""
    acc = np.zeros(idx.doc_count, dtype=np.float64)
    for tid in side_ids:
        qw = side.get(tid)
        if qw < 0.0:
            raise CptDomainError(
                f"query term {idx.vocab.term(int(tid))!r} has a negative weight; "
                "pseudo-term scoring needs w >= 0"
            )
        if qw == 0.0:
            continue
        posting = idx._postings.get(int(tid))
        if posting is None:
            continue
        doc_ids, weights = posting
        if float(weights.min()) < 0.0:
            raise CptDomainError(
                f"term {idx.vocab.term(int(tid))!r} has negative document weights; "
                "pseudo-term scoring needs a nonnegative corpus"
            )
        acc[doc_ids] += np.sqrt(qw * weights)
    return acc


def _write_uvarint(buf: bytearray, value: int) -> None:
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            buf.append(byte | 0x80)
        else:
            buf.append(byte)
            return


def _read_uvarint(data: bytes, pos: int) -> tuple[int, int]:
    result = 0
    shift = 0
    while True:
        if pos >= len(data):
            raise IndexFormatError("truncated varint")
        byte = data[pos]
        pos += 1
        result |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return result, pos
        shift += 7


def _write_str(buf: bytearray, s: str) -> None:
    raw = s.encode("utf-8")
    buf += struct.pack("<I", len(raw))
    buf += raw


def _read_str(data: bytes, pos: int) -> tuple[str, int]:
    (length,) = struct.unpack_from("<I", data, pos)
    pos += 4
    end = pos + length
    if end > len(data):
        raise IndexFormatError("truncated string block")
    return data[pos:end].decode("utf-8"), end


def save(idx: InvertedIndex, path) -> None:
    """Serialize to *path*; ``load(save(idx))`` reproduces identical searches."""
    buf = bytearray()
    buf += MAGIC
    buf += struct.pack("<I", FORMAT_VERSION)
    terms = idx.vocab.terms
    buf += struct.pack("<I", len(terms))
    for term in terms:
        _write_str(buf, term)
    buf += struct.pack("<I", idx.doc_count)
    for name in idx.doc_names:
        _write_str(buf, name)
    buf += struct.pack("<I", idx.term_count)
    for tid in sorted(idx._postings):
        doc_ids, weights = idx._postings[tid]
        buf += struct.pack("<II", tid, doc_ids.size)
        previous = -1
        for d in doc_ids.tolist():
            _write_uvarint(buf, d - previous)
            previous = d
        buf += weights.astype("<f8").tobytes()
    buf += struct.pack("<I", zlib.crc32(bytes(buf)) & 0xFFFFFFFF)
    with open(path, "wb") as fh:
        fh.write(buf)


def load(path) -> InvertedIndex:
    """Read an index written by :func:`save`, verifying version and checksum."""
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 12 or data[:4] != MAGIC:
        raise IndexFormatError(f"{path}: not an index file (bad magic)")
    stored_crc = struct.unpack_from("<I", data, len(data) - 4)[0]
    if zlib.crc32(data[:-4]) & 0xFFFFFFFF != stored_crc:
        raise IndexFormatError(f"{path}: checksum mismatch (corrupt or truncated file)")
    (version,) = struct.unpack_from("<I", data, 4)
    if version != FORMAT_VERSION:
        raise IndexFormatError(f"{path}: unsupported format version {version}")
    pos = 8
    try:
        (n_terms,) = struct.unpack_from("<I", data, pos)
        pos += 4
        terms = []
        for _ in range(n_terms):
            term, pos = _read_str(data, pos)
            terms.append(term)
        vocab = Vocabulary(terms)
        (n_docs,) = struct.unpack_from("<I", data, pos)
        pos += 4
        doc_names = []
        for _ in range(n_docs):
            name, pos = _read_str(data, pos)
            doc_names.append(name)
        (n_lists,) = struct.unpack_from("<I", data, pos)
        pos += 4
        postings: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        for _ in range(n_lists):
            tid, count = struct.unpack_from("<II", data, pos)
            pos += 8
            doc_ids = np.empty(count, dtype=np.uint32)
            previous = -1
            for i in range(count):
                gap, pos = _read_uvarint(data, pos)
                previous += gap
                doc_ids[i] = previous
            end = pos + 8 * count
            if end > len(data) - 4:
                raise IndexFormatError(f"{path}: truncated posting list")
            weights = np.frombuffer(data, dtype="<f8", count=count, offset=pos).astype(
                np.float64
            )
            pos = end
            postings[tid] = (doc_ids, weights)
    except struct.error as exc:
        raise IndexFormatError(f"{path}: truncated index file") from exc
    return InvertedIndex(vocab, doc_names, postings)
