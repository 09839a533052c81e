"""Ranking quality metrics over binary relevance labels.

All metrics treat a query with no relevant documents as scoring 0.0; callers
that need to distinguish "no positives exist" from "positives were missed"
should check the label set before aggregating.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from typing import AbstractSet


def ndcg_at_k(ranking: Sequence[str], relevant: AbstractSet[str], k: int) -> float:
    """Binary NDCG@k with the log2(i+1) discount, ranks 1-based."""
    if k <= 0:
        raise ValueError("k must be positive")
    if not relevant:
        return 0.0
    dcg = 0.0
    for i, doc_id in enumerate(ranking[:k], start=1):
        if doc_id in relevant:
            dcg += 1.0 / math.log2(i + 1)
    ideal_hits = min(len(relevant), k)
    idcg = sum(1.0 / math.log2(i + 1) for i in range(1, ideal_hits + 1))
    if idcg == 0.0:
        return 0.0
    return dcg / idcg


def recall_at_k(ranking: Sequence[str], relevant: AbstractSet[str], k: int) -> float:
    """Fraction of the relevant set found in the top k."""
    if k <= 0:
        raise ValueError("k must be positive")
    if not relevant:
        return 0.0
    hits = sum(1 for doc_id in ranking[:k] if doc_id in relevant)
    return hits / len(relevant)


def reciprocal_rank(ranking: Sequence[str], relevant: AbstractSet[str]) -> float:
    """1 / rank of the first relevant document, 0.0 if none appears."""
    if not relevant:
        return 0.0
    for i, doc_id in enumerate(ranking, start=1):
        if doc_id in relevant:
            return 1.0 / i
    return 0.0


def mrr(rankings: Sequence[Sequence[str]], relevant_sets: Sequence[AbstractSet[str]]) -> float:
    """Mean reciprocal rank over paired rankings and label sets."""
    if len(rankings) != len(relevant_sets):
        raise ValueError("rankings and relevant_sets must pair up")
    if not rankings:
        return 0.0
    total = sum(reciprocal_rank(r, rel) for r, rel in zip(rankings, relevant_sets))
    return total / len(rankings)
