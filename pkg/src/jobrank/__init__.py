"""Hybrid job search: three-channel retrieval, rank fusion, and an
explainable six-factor reranker."""

from .bundle import IndexBundle, build_indexes, corpus_fingerprint
from .config import default_config, load_config
from .errors import JobRankError, ValidationError
from .explain import Evidence, Explanation, audit_explanation, generate_explanation
from .graph import KnowledgeGraph, build_graph
from .ingest import IngestReport, SkillSynonymTable, load_postings, parse_resume
from .models import (
    CandidateProfile,
    Channel,
    CompanyRef,
    ConstraintSet,
    Degree,
    JobPosting,
    Level,
    Location,
    RankedList,
)
from .pipeline import SearchOutcome, StructuredQuery, search
from .rerank import FACTOR_ORDER, FactorScores, Reranker, WeightVector, utility

__version__ = "0.1.0"

__all__ = [
    "IndexBundle",
    "build_indexes",
    "corpus_fingerprint",
    "default_config",
    "load_config",
    "JobRankError",
    "ValidationError",
    "Evidence",
    "Explanation",
    "audit_explanation",
    "generate_explanation",
    "KnowledgeGraph",
    "build_graph",
    "IngestReport",
    "SkillSynonymTable",
    "load_postings",
    "parse_resume",
    "CandidateProfile",
    "Channel",
    "CompanyRef",
    "ConstraintSet",
    "Degree",
    "JobPosting",
    "Level",
    "Location",
    "RankedList",
    "SearchOutcome",
    "StructuredQuery",
    "search",
    "FACTOR_ORDER",
    "FactorScores",
    "Reranker",
    "WeightVector",
    "utility",
    "__version__",
]
