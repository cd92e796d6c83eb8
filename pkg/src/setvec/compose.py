"""Compositional query encoding: dispatch a set operator and method to vector ops.

Supported (operator, method) pairs:

    difference    subtract | ignore | disentangled | orthogonal | nrf
    union         add | maxpool
    intersection  add | maxpool | cpt
    atomic        atomic

``cpt`` is the only method producing a :class:`PseudoTermVector`; everything
else returns a plain :class:`SparseVector`.  Inputs are never mutated, and an
empty atomic vector is legal: it propagates as an empty result.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cpt import PseudoTermVector, expand_query
from .sparse import SparseVector, add, mask_remove, maxpool, project, scale, sub

OP_DIFFERENCE = "difference"
OP_UNION = "union"
OP_INTERSECTION = "intersection"
OP_ATOMIC = "atomic"

METHODS = {
    OP_DIFFERENCE: ("subtract", "ignore", "disentangled", "orthogonal", "nrf"),
    OP_UNION: ("add", "maxpool"),
    OP_INTERSECTION: ("add", "maxpool", "cpt"),
    OP_ATOMIC: ("atomic",),
}

DEFAULT_LAMBDA = 0.5
DEFAULT_M = 5


@dataclass(frozen=True)
class CompositionParams:
    """Knobs used by individual methods: nrf's lambda and cpt's top-m."""

    lambda_: float = DEFAULT_LAMBDA
    m: int = DEFAULT_M


@dataclass(frozen=True)
class CompositionalQuery:
    qid: str
    operator: str
    method: str
    a: SparseVector
    b: SparseVector | None = None
    params: CompositionParams = field(default_factory=CompositionParams)

    def __post_init__(self):
        if self.operator not in METHODS:
            raise ValueError(f"unknown operator {self.operator!r}")
        if self.method not in METHODS[self.operator]:
            raise ValueError(
                f"method {self.method!r} is not valid for operator {self.operator!r}"
            )
        if self.operator == OP_ATOMIC:
            if self.b is not None:
                raise ValueError("atomic queries must not carry a second vector")
        elif self.b is None:
            raise ValueError(f"operator {self.operator!r} requires a second vector")


def difference_subtract(a: SparseVector, b: SparseVector) -> SparseVector:
    """Plain subtraction ``a - b``; penalizes shared terms along with negated ones."""
    return sub(a, b)


def difference_ignore(a: SparseVector, b: SparseVector) -> SparseVector:
    """Drop the negated part entirely."""
    return a


def difference_disentangled(a: SparseVector, b: SparseVector) -> SparseVector:
    """``a - b*`` where ``b*`` is *b* with a's dimensions masked out.

    Keeps every weight of *a* untouched and penalizes only terms that appear
    exclusively in *b*.
    """
    return sub(a, mask_remove(b, a))


def difference_orthogonal(a: SparseVector, b: SparseVector) -> SparseVector:
    """Remove a's component along *b*: ``a - (a.b / |b|^2) b``."""
    return sub(a, project(a, b))


def difference_nrf(a: SparseVector, b: SparseVector, lambda_: float = DEFAULT_LAMBDA) -> SparseVector:
    """Negative relevance feedback ``a - lambda * b`` (Rocchio-style)."""
    if lambda_ < 0.0:
        raise ValueError("nrf lambda must be nonnegative")
    return sub(a, scale(b, lambda_))


def union_add(a: SparseVector, b: SparseVector) -> SparseVector:
    """Union by addition; shared terms are counted twice."""
    return add(a, b)


def union_maxpool(a: SparseVector, b: SparseVector) -> SparseVector:
    """Union by elementwise max, avoiding double-counted shared terms."""
    return maxpool(a, b)


def intersection_add(a: SparseVector, b: SparseVector) -> SparseVector:
    """Addition used as an intersection surrogate (ablation labeling only)."""
    return add(a, b)


def intersection_maxpool(a: SparseVector, b: SparseVector) -> SparseVector:
    return maxpool(a, b)


def intersection_cpt(a: SparseVector, b: SparseVector, m: int = DEFAULT_M) -> PseudoTermVector:
    """Pseudo-term outer product of the truncated sides."""
    return expand_query(a, b, m)


def compose(q: CompositionalQuery) -> SparseVector | PseudoTermVector:
    """Apply the query's (operator, method) pair to its atomic vectors."""
    if q.operator == OP_ATOMIC:
        return q.a
    if q.operator == OP_DIFFERENCE:
        if q.method == "subtract":
            return difference_subtract(q.a, q.b)
        if q.method == "ignore":
            return difference_ignore(q.a, q.b)
        if q.method == "disentangled":
            return difference_disentangled(q.a, q.b)
        if q.method == "orthogonal":
            return difference_orthogonal(q.a, q.b)
        return difference_nrf(q.a, q.b, q.params.lambda_)
    if q.operator == OP_UNION:
        return union_add(q.a, q.b) if q.method == "add" else union_maxpool(q.a, q.b)
    if q.method == "add":
        return intersection_add(q.a, q.b)
    if q.method == "maxpool":
        return intersection_maxpool(q.a, q.b)
    return intersection_cpt(q.a, q.b, q.params.m)
