"""Combined pseudo-terms: quadratic term-pair expansions for intersections.

An intersection query over atomic vectors A and B is expanded into weighted
term *pairs* ``(i, j)`` with weight ``sqrt(a_i * b_j)``; documents expand into
pairs over their own support with weight ``sqrt(d_i * d_j)``.  The score is
the inner product over matching pairs, which factorizes:

    sum_ij sqrt(a_i b_j) sqrt(d_i d_j) = (sum_i sqrt(a_i d_i)) (sum_j sqrt(b_j d_j))

so the quadratic expansion never has to be materialized at retrieval time.
A document scores above zero only when it overlaps *both* truncated sides.
All weights must be nonnegative (sqrt domain); negative input raises rather
than being clamped, since it signals a misconfigured encoder.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator

import numpy as np

from .errors import CptDomainError, VocabularyMismatchError
from .sparse import SparseVector, Vocabulary, top_m

PAIR_SEPARATOR = "∩"  # the set-intersection glyph used in debug dumps


class PseudoTermVector:
    """Sparse vector over ordered term pairs, sorted lexicographically by pair."""

    __slots__ = ("_entries", "vocab")

    def __init__(self, entries: Iterable[tuple[tuple[int, int], float]], vocab: Vocabulary):
        items = sorted(entries)
        seen: dict[tuple[int, int], float] = {}
        for pair, weight in items:
            if pair in seen:
                raise ValueError(f"duplicate pseudo-term pair {pair}")
            if not weight > 0.0:
                raise ValueError("pseudo-term weights must be strictly positive")
            seen[(int(pair[0]), int(pair[1]))] = float(weight)
        self._entries = seen
        self.vocab = vocab

    @property
    def nnz(self) -> int:
        return len(self._entries)

    def weight(self, i: int, j: int) -> float:
        return self._entries.get((i, j), 0.0)

    def entries(self) -> Iterator[tuple[tuple[int, int], float]]:
        yield from self._entries.items()

    def pair_ids(self) -> set[tuple[int, int]]:
        return set(self._entries)

    def side_ids(self) -> tuple[list[int], list[int]]:
        """Distinct first-side and second-side term ids, ascending."""
        return (
            sorted({i for i, _ in self._entries}),
            sorted({j for _, j in self._entries}),
        )

    def to_dict(self) -> dict[str, float]:
        """Debug rendering with ``termA∩termB`` keys."""
        return {
            f"{self.vocab.term(i)}{PAIR_SEPARATOR}{self.vocab.term(j)}": w
            for (i, j), w in self._entries.items()
        }

    def __len__(self) -> int:
        return self.nnz

    def __eq__(self, other) -> bool:
        if not isinstance(other, PseudoTermVector):
            return NotImplemented
        return self.vocab is other.vocab and self._entries == other._entries

    def __repr__(self) -> str:
        head = ", ".join(f"{k}:{w:g}" for k, w in list(self.to_dict().items())[:4])
        tail = ", ..." if self.nnz > 4 else ""
        return f"PseudoTermVector({head}{tail})"


def _require_nonnegative(v: SparseVector, label: str) -> None:
    if v.nnz and float(v.weights.min()) < 0.0:
        raise CptDomainError(f"{label} carries negative weights; pseudo-terms need w >= 0")


def expand_query(a: SparseVector, b: SparseVector, m: int = 5) -> PseudoTermVector:
    """Outer product of the two truncated sides: pairs ``(i, j)``, ``sqrt(a_i b_j)``.

    Each atomic side is truncated to its top-*m* terms first, bounding the
    expansion at ``m**2`` pairs.
    """
    if a.vocab is not b.vocab:
        raise VocabularyMismatchError("query sides use different vocabularies")
    _require_nonnegative(a, "query side A")
    _require_nonnegative(b, "query side B")
    a_top = top_m(a, m)
    b_top = top_m(b, m)
    entries = [
        ((int(i), int(j)), math.sqrt(float(wi) * float(wj)))
        for i, wi in zip(a_top.ids, a_top.weights)
        for j, wj in zip(b_top.ids, b_top.weights)
    ]
    return PseudoTermVector(entries, a.vocab)


def expand_doc(
    d: SparseVector, restrict_to: Iterable[tuple[int, int]] | None = None
) -> PseudoTermVector:
    """Pairs over the document's own support with weight ``sqrt(d_i d_j)``.

    With *restrict_to*, only the named pairs are materialized (the on-the-fly
    path used when rescoring candidates against a known query expansion).
    """
    _require_nonnegative(d, "document")
    if restrict_to is None:
        entries = [
            ((int(i), int(j)), math.sqrt(float(wi) * float(wj)))
            for i, wi in zip(d.ids, d.weights)
            for j, wj in zip(d.ids, d.weights)
        ]
        return PseudoTermVector(entries, d.vocab)
    entries = []
    for i, j in set(restrict_to):
        wi = d.get(int(i))
        wj = d.get(int(j))
        if wi != 0.0 and wj != 0.0:
            entries.append(((int(i), int(j)), math.sqrt(wi * wj)))
    return PseudoTermVector(entries, d.vocab)


def cpt_score(q: PseudoTermVector, d_exp: PseudoTermVector) -> float:
    """Inner product over matching pairs, accumulated in pair order."""
    if q.vocab is not d_exp.vocab:
        raise VocabularyMismatchError("pseudo-term operands use different vocabularies")
    total = 0.0
    for pair, qw in sorted(q.entries()):
        dw = d_exp.weight(*pair)
        if dw != 0.0:
            total += qw * dw
    return total


def cpt_score_factorized(a_top: SparseVector, b_top: SparseVector, d: SparseVector) -> float:
    """Equivalent score without expanding the document.

    ``(sum_i sqrt(a_i d_i)) * (sum_j sqrt(b_j d_j))`` over shared supports;
    *a_top* and *b_top* are expected to be truncated already.
    """
    if a_top.vocab is not d.vocab or b_top.vocab is not d.vocab:
        raise VocabularyMismatchError("operands use different vocabularies")
    _require_nonnegative(a_top, "query side A")
    _require_nonnegative(b_top, "query side B")
    _require_nonnegative(d, "document")
    return _sqrt_overlap(a_top, d) * _sqrt_overlap(b_top, d)


def _sqrt_overlap(q: SparseVector, d: SparseVector) -> float:
    """``sum_i sqrt(q_i * d_i)`` over shared ids, ascending."""
    if q.nnz == 0 or d.nnz == 0:
        return 0.0
    _, iq, id_ = np.intersect1d(q.ids, d.ids, assume_unique=True, return_indices=True)
    total = 0.0
    for wq, wd in zip(q.weights[iq], d.weights[id_]):
        total += math.sqrt(float(wq) * float(wd))
    return total
