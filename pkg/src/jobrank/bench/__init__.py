"""Benchmark construction and evaluation tools."""

from .builder import BenchmarkConfig, build_benchmark, generate_queries, silver_label, split_skill_disjoint
from .metrics import mrr, ndcg_at_k, recall_at_k, reciprocal_rank
from .synthetic import synthetic_corpus, synthetic_profiles

__all__ = [
    "BenchmarkConfig",
    "build_benchmark",
    "generate_queries",
    "silver_label",
    "split_skill_disjoint",
    "mrr",
    "ndcg_at_k",
    "recall_at_k",
    "reciprocal_rank",
    "synthetic_corpus",
    "synthetic_profiles",
]
