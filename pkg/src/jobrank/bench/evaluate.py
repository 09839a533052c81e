"""Benchmark evaluation: the channel-ablation grid with quality and latency.

Each grid row is one retrieval configuration. The ``bm25`` row is the plain
keyword baseline: it searches the lexical index with the raw query tokens
and skips enrichment entirely, which is how a stock keyword engine would
see the query. Rows that include the graph or semantic channels go through
the full pipeline with inactive channels zeroed and the rest renormalized.

Quality metrics are computed on the final ordering of each row; recall is
computed on the fused candidate pool before constraint filtering, since it
measures what retrieval surfaced rather than what filters kept.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from ..bundle import IndexBundle
from ..errors import CorpusFingerprintMismatch
from ..lexical import tokenize
from ..models import Channel, RankedList
from ..pipeline import CHANNELS, fuse_rrf, search
from ..rerank import Reranker
from .builder import BenchQuery
from .metrics import ndcg_at_k, recall_at_k, reciprocal_rank


@dataclass(frozen=True)
class EvalConfig:
    name: str
    channels: tuple[str, ...]
    rerank: bool = False
    raw_lexical: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "channels": list(self.channels),
            "rerank": self.rerank,
            "raw_lexical": self.raw_lexical,
        }


DEFAULT_GRID: tuple[EvalConfig, ...] = (
    EvalConfig("bm25", ("lexical",), raw_lexical=True),
    EvalConfig("semantic", ("semantic",)),
    EvalConfig("kg", ("graph",)),
    EvalConfig("hybrid", CHANNELS),
    EvalConfig("hybrid+rerank", CHANNELS, rerank=True),
)


@dataclass
class QueryRun:
    query_id: str
    final_ids: list[str]
    fused_ids: list[str]
    latency_ms: float


@dataclass
class EvalReport:
    grid: list[dict[str, Any]] = field(default_factory=list)
    per_query: dict[str, dict[str, dict[str, float]]] = field(default_factory=dict)
    zero_label_queries: list[str] = field(default_factory=list)
    corpus_fingerprint: str = ""
    query_count: int = 0
    posting_count: int = 0

    def row(self, name: str) -> dict[str, Any]:
        for r in self.grid:
            if r["name"] == name:
                return r
        raise KeyError(name)

    def to_dict(self) -> dict[str, Any]:
        return {
            "corpus_fingerprint": self.corpus_fingerprint,
            "query_count": self.query_count,
            "posting_count": self.posting_count,
            "zero_label_queries": list(self.zero_label_queries),
            "grid": self.grid,
            "per_query": self.per_query,
        }


def percentile(values: Sequence[float], pct: float) -> float:
    """Nearest-rank percentile; pct in (0, 100]."""
    if not values:
        return 0.0
    ordered = sorted(values)
    rank = max(1, -(-len(ordered) * pct // 100))  # ceil without floats
    return ordered[int(rank) - 1]


def _raw_lexical_run(
    bundle: IndexBundle, cfg: Mapping[str, Any], text: str
) -> QueryRun:
    depth = int(cfg["fusion"]["depths"]["lexical"])
    t0 = time.perf_counter()
    tokens = tokenize(text)
    if tokens:
        ranked = bundle.lexical.search(tokens, depth)
    else:
        ranked = RankedList(Channel.LEXICAL, (), depth)
    fused = fuse_rrf({"lexical": ranked}, {"lexical": 1.0}, cfg)
    elapsed = (time.perf_counter() - t0) * 1000.0
    ids = fused.job_ids()
    return QueryRun(query_id="", final_ids=ids, fused_ids=ids, latency_ms=elapsed)


def _pipeline_run(
    bundle: IndexBundle,
    cfg: Mapping[str, Any],
    text: str,
    config: EvalConfig,
    reranker: Reranker,
) -> QueryRun:
    t0 = time.perf_counter()
    outcome = search(
        text,
        bundle,
        cfg,
        channels=config.channels,
        reranker=reranker,
        rerank_enabled=config.rerank,
    )
    elapsed = (time.perf_counter() - t0) * 1000.0
    return QueryRun(
        query_id="",
        final_ids=outcome.reranked.job_ids(),
        fused_ids=outcome.fused.job_ids(),
        latency_ms=elapsed,
    )


def run_query(
    bundle: IndexBundle,
    cfg: Mapping[str, Any],
    query: BenchQuery,
    config: EvalConfig,
    reranker: Reranker,
) -> QueryRun:
    if config.raw_lexical:
        run = _raw_lexical_run(bundle, cfg, query.text)
    else:
        run = _pipeline_run(bundle, cfg, query.text, config, reranker)
    run.query_id = query.query_id
    return run


def run_eval(
    bundle: IndexBundle,
    benchmark: Mapping[str, Any],
    configs: Sequence[EvalConfig] = DEFAULT_GRID,
    ndcg_ks: tuple[int, ...] = (5, 10),
    recall_ks: tuple[int, ...] = (50, 100),
) -> EvalReport:
    """Run every configuration over every benchmark query."""
    manifest = benchmark["manifest"]
    if manifest["corpus_fingerprint"] != bundle.fingerprint:
        raise CorpusFingerprintMismatch(
            "benchmark was built from a different corpus than this bundle"
        )
    cfg = bundle.config
    queries = [BenchQuery.from_dict(d) for d in benchmark["queries"]]
    labels = {qid: set(ids) for qid, ids in benchmark["labels"].items()}

    known_cities = {
        p.location.city.lower() for p in bundle.postings.values() if p.location.city
    }
    known_states = {
        p.location.state.lower() for p in bundle.postings.values() if p.location.state
    }

    report = EvalReport(
        corpus_fingerprint=bundle.fingerprint,
        query_count=len(queries),
        posting_count=len(bundle.postings),
        zero_label_queries=sorted(q.query_id for q in queries if not labels.get(q.query_id)),
    )

    slices_by_query: dict[str, list[str]] = {}
    for q in queries:
        tokens = set(tokenize(q.text))
        norm_text = " ".join(tokenize(q.text))
        seniority_words = set(cfg["seniority"]["senior_title_keywords"]) | set(
            cfg["seniority"]["junior_title_keywords"]
        )
        s = [f"template:{q.template}"]
        has_city = any(f" {c} " in f" {norm_text} " for c in known_cities)
        s.append(
            "location:mentioned"
            if (has_city or tokens & known_states)
            else "location:unmentioned"
        )
        s.append(
            "seniority:mentioned" if tokens & seniority_words else "seniority:unmentioned"
        )
        s.append("salary:unspecified")
        slices_by_query[q.query_id] = s

    for config in configs:
        reranker = Reranker(bundle, cfg)
        runs: list[QueryRun] = []
        for q in queries:
            runs.append(run_query(bundle, cfg, q, config, reranker))

        per_query: dict[str, dict[str, float]] = {}
        latencies: list[float] = []
        for q, run in zip(queries, runs):
            rel = labels.get(q.query_id, set())
            row = {f"ndcg@{k}": ndcg_at_k(run.final_ids, rel, k) for k in ndcg_ks}
            for k in recall_ks:
                row[f"recall@{k}"] = recall_at_k(run.fused_ids, rel, k)
            row["rr"] = reciprocal_rank(run.final_ids, rel)
            row["latency_ms"] = run.latency_ms
            per_query[q.query_id] = row
            latencies.append(run.latency_ms)

        n = len(queries)
        metrics: dict[str, float] = {}
        for key in [f"ndcg@{k}" for k in ndcg_ks] + [f"recall@{k}" for k in recall_ks]:
            metrics[key] = sum(per_query[q.query_id][key] for q in queries) / n if n else 0.0
        metrics["mrr"] = sum(per_query[q.query_id]["rr"] for q in queries) / n if n else 0.0

        by_split: dict[str, dict[str, float]] = {}
        for split in ("train", "dev", "test"):
            members = [q for q in queries if q.split == split]
            if not members:
                continue
            by_split[split] = {
                "count": float(len(members)),
                "ndcg@10": sum(per_query[q.query_id].get("ndcg@10", 0.0) for q in members)
                / len(members),
            }

        by_slice: dict[str, dict[str, float]] = {}
        all_slices = sorted({s for q in queries for s in slices_by_query[q.query_id]})
        for slice_name in all_slices:
            members = [q for q in queries if slice_name in slices_by_query[q.query_id]]
            if not members:
                continue
            by_slice[slice_name] = {
                "count": float(len(members)),
                "ndcg@10": sum(per_query[q.query_id].get("ndcg@10", 0.0) for q in members)
                / len(members),
            }

        report.grid.append(
            {
                "name": config.name,
                "channels": list(config.channels),
                "rerank": config.rerank,
                "raw_lexical": config.raw_lexical,
                "metrics": metrics,
                "latency_ms": {
                    "p50": statistics.median(latencies) if latencies else 0.0,
                    "p95": percentile(latencies, 95.0),
                    "mean": sum(latencies) / len(latencies) if latencies else 0.0,
                },
                "by_split": by_split,
                "by_slice": by_slice,
            }
        )
        report.per_query[config.name] = per_query
    return report
