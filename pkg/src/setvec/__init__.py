"""setvec: set-compositional and negated query algebra over sparse vectors.

Build lexically grounded sparse representations, combine them with
set-style vector operations (subtraction, disentangled or orthogonal
negation, relevance feedback, union by addition or max-pooling, pseudo-term
intersections), retrieve exactly with a negative-weight-aware inverted
index, and evaluate rankings with standard TREC-style metrics.
"""

from .activations import (
    ActivationConfig,
    LogitMatrix,
    activate,
    snrelu_activate,
    snrelu_neg,
    snrelu_pos,
    splade_activate,
)
from .compose import (
    CompositionalQuery,
    CompositionParams,
    compose,
    difference_disentangled,
    difference_ignore,
    difference_nrf,
    difference_orthogonal,
    difference_subtract,
    intersection_add,
    intersection_cpt,
    intersection_maxpool,
    union_add,
    union_maxpool,
)
from .cpt import (
    PseudoTermVector,
    cpt_score,
    cpt_score_factorized,
    expand_doc,
    expand_query,
)
from .errors import (
    CorpusStatsError,
    CptDomainError,
    DuplicateDocError,
    FormatError,
    IndexFormatError,
    SetvecError,
    UndefinedMetricError,
    UnknownTermError,
    VocabularyMismatchError,
    ZeroNormError,
)
from .evaluation import (
    InterferenceBin,
    PairedQueries,
    Qrels,
    interference_bins,
    ndcg_at_k,
    pairwise_accuracy,
    recall_at_k,
)
from .fusion import ScoredRun, fuse, min_max_scale
from .index import InvertedIndex, SearchResult, build, load, save, search, search_cpt
from .lexical import CorpusStats, corpus_stats, encode_bm25_doc, encode_tf, tokenize
from .sparse import (
    SparseVector,
    Vocabulary,
    add,
    cosine,
    dot,
    mask_remove,
    maxpool,
    norm,
    project,
    scale,
    sub,
    top_m,
)

__version__ = "0.1.0"

__all__ = [
    "ActivationConfig",
    "CompositionParams",
    "CompositionalQuery",
    "CorpusStats",
    "CorpusStatsError",
    "CptDomainError",
    "DuplicateDocError",
    "FormatError",
    "IndexFormatError",
    "InterferenceBin",
    "InvertedIndex",
    "LogitMatrix",
    "PairedQueries",
    "PseudoTermVector",
    "Qrels",
    "ScoredRun",
    "SearchResult",
    "SetvecError",
    "SparseVector",
    "UndefinedMetricError",
    "UnknownTermError",
    "Vocabulary",
    "VocabularyMismatchError",
    "ZeroNormError",
    "activate",
    "add",
    "build",
    "compose",
    "corpus_stats",
    "cosine",
    "cpt_score",
    "cpt_score_factorized",
    "difference_disentangled",
    "difference_ignore",
    "difference_nrf",
    "difference_orthogonal",
    "difference_subtract",
    "dot",
    "encode_bm25_doc",
    "encode_tf",
    "expand_doc",
    "expand_query",
    "fuse",
    "interference_bins",
    "intersection_add",
    "intersection_cpt",
    "intersection_maxpool",
    "load",
    "mask_remove",
    "maxpool",
    "min_max_scale",
    "ndcg_at_k",
    "norm",
    "pairwise_accuracy",
    "project",
    "recall_at_k",
    "save",
    "scale",
    "search",
    "search_cpt",
    "snrelu_activate",
    "snrelu_neg",
    "snrelu_pos",
    "splade_activate",
    "sub",
    "top_m",
    "union_add",
    "union_maxpool",
]
